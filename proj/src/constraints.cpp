#include "flowevade/constraints.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace flowevade::constraints {

using nlohmann::json;

void ConstraintProfile::validate(const FeatureSchema* schema) const {
  if (mask.size() != ranges.size()) throw std::logic_error("profile: mask/ranges width mismatch");
  for (double m : mask)
    if (m != 0.0 && m != 1.0) throw std::logic_error("profile: mask component not in {0,1}");
  for (const auto& r : ranges) {
    if (!(r.lo <= r.hi)) throw std::logic_error("profile: d_min > d_max");
    if (r.lo < 0.0 || r.hi > 1.0) throw std::logic_error("profile: range outside [0,1]");
  }
  if (schema) {
    if (mask.size() != schema->n_encoded) throw std::logic_error("profile: width != n_encoded");
    for (const auto& g : schema->one_hot_groups)
      for (std::size_t e = g.begin; e < g.end; ++e)
        if (mask[e] != 0.0) throw std::logic_error("profile: one-hot column not masked");
    for (std::size_t e : schema->semantic_encoded_indices(attack_class))
      if (mask[e] != 0.0) throw std::logic_error("profile: semantic feature not masked");
  }
}

std::vector<double> build_mask(const FeatureSchema& schema, const std::string& attack_class,
                               const std::string& protocol) {
  if (!schema.known_classes.empty() &&
      std::find(schema.known_classes.begin(), schema.known_classes.end(), attack_class) ==
          schema.known_classes.end())
    throw std::invalid_argument("build_mask: unknown class '" + attack_class + "'");
  if (!protocol.empty()) {
    std::set<std::string> tags;
    for (const auto& f : schema.features)
      if (!f.protocol_tag.empty()) tags.insert(f.protocol_tag);
    if (!tags.count(protocol))
      throw std::invalid_argument("build_mask: unknown protocol '" + protocol + "'");
  }

  std::vector<double> mask(schema.n_encoded, 1.0);
  for (std::size_t e : schema.semantic_encoded_indices(attack_class)) mask[e] = 0.0;
  for (const auto& g : schema.one_hot_groups)
    for (std::size_t e = g.begin; e < g.end; ++e) mask[e] = 0.0;
  if (!protocol.empty()) {
    for (std::size_t f = 0; f < schema.n_raw; ++f) {
      const auto& tag = schema.features[f].protocol_tag;
      if (tag.empty() || tag == protocol) continue;
      const auto& r = schema.encoded_ranges[f];
      for (std::size_t e = r.begin; e < r.end; ++e) mask[e] = 0.0;
    }
  }
  return mask;
}

std::vector<double> apply_mask(const std::vector<double>& delta,
                               const std::vector<double>& mask) {
  if (delta.size() != mask.size())
    throw std::invalid_argument("apply_mask: length mismatch");
  std::vector<double> out(delta.size());
  for (std::size_t i = 0; i < delta.size(); ++i) out[i] = delta[i] * mask[i];
  return out;
}

std::vector<Range> compute_valid_ranges(const FlowDataset& dataset,
                                        const std::string& attack_class) {
  const auto members = dataset.indices_of_class(attack_class);
  if (members.empty())
    throw std::invalid_argument("compute_valid_ranges: no samples of class " + attack_class);
  std::vector<Range> ranges(dataset.width());
  for (std::size_t c = 0; c < dataset.width(); ++c) {
    double lo = dataset.X(members[0], c);
    double hi = lo;
    for (std::size_t i = 1; i < members.size(); ++i) {
      const double v = dataset.X(members[i], c);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    ranges[c] = {lo, hi};
  }
  return ranges;
}

std::vector<double> clip_to_ranges(const std::vector<double>& x_star,
                                   const std::vector<Range>& ranges) {
  if (x_star.size() != ranges.size())
    throw std::invalid_argument("clip_to_ranges: length mismatch");
  std::vector<double> out(x_star.size());
  for (std::size_t i = 0; i < x_star.size(); ++i)
    out[i] = std::clamp(x_star[i], ranges[i].lo, ranges[i].hi);
  return out;
}

ComplianceReport validate_flow(const std::vector<double>& x_orig,
                               const std::vector<double>& x_star,
                               const ConstraintProfile& profile, const FeatureSchema* schema) {
  if (x_orig.size() != profile.width() || x_star.size() != profile.width())
    throw std::invalid_argument("validate_flow: vector width != profile width");
  ComplianceReport report;
  std::vector<bool> semantic(profile.width(), false);
  if (schema)
    for (std::size_t e : schema->semantic_encoded_indices(profile.attack_class))
      semantic[e] = true;
  for (std::size_t i = 0; i < profile.width(); ++i) {
    if (profile.mask[i] == 0.0 && x_star[i] != x_orig[i]) {
      report.mask_violations.push_back(i);
      if (semantic[i]) report.semantic_drift.push_back(i);
    }
    if (x_star[i] < profile.ranges[i].lo || x_star[i] > profile.ranges[i].hi) {
      report.range_violations.push_back({i, x_star[i], profile.ranges[i]});
    }
  }
  report.passed = report.mask_violations.empty() && report.range_violations.empty() &&
                  report.semantic_drift.empty();
  return report;
}

ConstraintProfile build_profile(const FlowDataset& train, const std::string& attack_class,
                                const std::string& protocol) {
  ConstraintProfile p;
  p.attack_class = attack_class;
  p.mask = build_mask(train.schema, attack_class, protocol);
  p.ranges = compute_valid_ranges(train, attack_class);
  p.provenance = train.source;
  p.class_samples = train.indices_of_class(attack_class).size();
  p.validate(&train.schema);
  return p;
}

std::string profile_to_text(const ConstraintProfile& profile) {
  json j;
  j["attack_class"] = profile.attack_class;
  j["width"] = profile.width();
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < profile.mask.size(); ++i)
    if (profile.mask[i] == 0.0) zeros.push_back(i);
  j["mask_zero_indices"] = zeros;
  json ranges = json::array();
  for (const auto& r : profile.ranges) ranges.push_back({r.lo, r.hi});
  j["ranges"] = ranges;
  j["provenance"] = profile.provenance;
  j["class_samples"] = profile.class_samples;
  return j.dump(2);
}

ConstraintProfile profile_from_text(const std::string& text) {
  const json j = json::parse(text);
  ConstraintProfile p;
  p.attack_class = j.at("attack_class").get<std::string>();
  const auto width = j.at("width").get<std::size_t>();
  p.mask.assign(width, 1.0);
  for (auto idx : j.at("mask_zero_indices").get<std::vector<std::size_t>>()) {
    if (idx >= width) throw std::invalid_argument("profile text: mask index out of range");
    p.mask[idx] = 0.0;
  }
  for (const auto& r : j.at("ranges")) p.ranges.push_back({r.at(0), r.at(1)});
  p.provenance = j.at("provenance").get<std::string>();
  p.class_samples = j.at("class_samples").get<std::size_t>();
  p.validate();
  return p;
}

void save_profile(const ConstraintProfile& profile, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write profile: " + path);
  out << profile_to_text(profile) << "\n";
}

ConstraintProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return profile_from_text(ss.str());
}

}  // namespace flowevade::constraints
