#include "flowevade/schema.hpp"

#include <algorithm>
#include <stdexcept>

namespace flowevade::flows {

std::size_t FeatureSchema::raw_of_encoded(std::size_t encoded_index) const {
  for (std::size_t f = 0; f < encoded_ranges.size(); ++f) {
    if (encoded_index >= encoded_ranges[f].begin && encoded_index < encoded_ranges[f].end)
      return f;
  }
  throw std::out_of_range("raw_of_encoded: index outside encoded space");
}

std::vector<std::size_t> FeatureSchema::semantic_encoded_indices(
    const std::string& attack_class) const {
  std::vector<bool> frozen(n_raw, false);
  for (std::size_t f = 0; f < features.size(); ++f)
    if (features[f].attack_semantic) frozen[f] = true;
  auto it = semantic_overrides.find(attack_class);
  if (it != semantic_overrides.end()) {
    for (const auto& name : it->second) {
      auto idx = feature_index(name);
      if (!idx) throw std::invalid_argument("semantic override names unknown feature: " + name);
      frozen[*idx] = true;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < n_raw; ++f) {
    if (!frozen[f]) continue;
    for (std::size_t e = encoded_ranges[f].begin; e < encoded_ranges[f].end; ++e)
      out.push_back(e);
  }
  return out;
}

std::optional<std::size_t> FeatureSchema::feature_index(const std::string& name) const {
  for (std::size_t f = 0; f < features.size(); ++f)
    if (features[f].name == name) return f;
  return std::nullopt;
}

void FeatureSchema::validate() const {
  if (features.size() != n_raw) throw std::logic_error("schema: n_raw mismatch");
  if (encoded_ranges.size() != n_raw) throw std::logic_error("schema: encoded_ranges size");
  if (n_encoded < n_raw) throw std::logic_error("schema: n_encoded < n_raw");
  std::vector<int> owner(n_encoded, -1);
  for (std::size_t f = 0; f < n_raw; ++f) {
    const auto& r = encoded_ranges[f];
    if (r.begin >= r.end || r.end > n_encoded)
      throw std::logic_error("schema: bad encoded range");
    for (std::size_t e = r.begin; e < r.end; ++e) {
      if (owner[e] != -1) throw std::logic_error("schema: overlapping encoded ranges");
      owner[e] = static_cast<int>(f);
    }
  }
  for (int o : owner)
    if (o == -1) throw std::logic_error("schema: encoded column without owner");
  for (const auto& g : one_hot_groups)
    if (g.end > n_encoded || g.begin >= g.end)
      throw std::logic_error("schema: one-hot group out of bounds");
}

FeatureSchema build_schema(std::vector<FeatureInfo> features,
                           std::vector<std::vector<std::string>> levels_per_categorical) {
  FeatureSchema s;
  s.features = std::move(features);
  s.n_raw = s.features.size();
  std::size_t cat_seen = 0;
  std::size_t cursor = 0;
  for (std::size_t f = 0; f < s.n_raw; ++f) {
    IndexRange r;
    r.begin = cursor;
    if (s.features[f].kind == FeatureKind::categorical) {
      if (cat_seen >= levels_per_categorical.size())
        throw std::invalid_argument("build_schema: missing level list for categorical feature");
      const auto& levels = levels_per_categorical[cat_seen];
      if (levels.empty())
        throw std::invalid_argument("build_schema: categorical feature with no levels");
      r.end = cursor + levels.size();
      s.one_hot_groups.push_back(r);
      s.categorical_levels.push_back(levels);
      ++cat_seen;
    } else {
      r.end = cursor + 1;
    }
    s.encoded_ranges.push_back(r);
    cursor = r.end;
  }
  if (cat_seen != levels_per_categorical.size())
    throw std::invalid_argument("build_schema: extra level lists supplied");
  s.n_encoded = cursor;
  s.validate();
  return s;
}

}  // namespace flowevade::flows
