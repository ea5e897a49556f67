#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "flowevade/loaders.hpp"
#include "flowevade/textutil.hpp"

namespace flowevade::flows {

namespace {

const std::vector<std::string>& cicids_label_set() {
  static const std::vector<std::string> labels = {"Benign", "Bot", "Pat", "DoS",
                                                  "Inf",    "Port", "Web"};
  return labels;
}

// Published 14-class subclass names (normalized) -> merged 7-class name.
const std::map<std::string, std::string>& cicids_subclass_map() {
  static const std::map<std::string, std::string> m = {
      {"benign", "Benign"},
      {"bot", "Bot"},
      {"botnet", "Bot"},
      {"ftp patator", "Pat"},
      {"ssh patator", "Pat"},
      {"ddos", "DoS"},
      {"dos", "DoS"},
      {"dos goldeneye", "DoS"},
      {"goldeneye", "DoS"},
      {"dos hulk", "DoS"},
      {"dos slowhttptest", "DoS"},
      {"dos slow httptest", "DoS"},
      {"dos slowloris", "DoS"},
      {"slowloris", "DoS"},
      {"heartbleed", "DoS"},
      {"infiltration", "Inf"},
      {"portscan", "Port"},
      {"port scan", "Port"},
      {"web attack brute force", "Web"},
      {"web attack sql injection", "Web"},
      {"web attack xss", "Web"},
      {"brute force", "Web"},
      {"sql injection", "Web"},
      {"xss", "Web"}};
  return m;
}

// Cleaning manifest: identifier and timestamp columns, dropped by name.
const std::set<std::string>& manifest_drops() {
  static const std::set<std::string> drops = {"flow id", "source ip",      "src ip",
                                              "destination ip", "dst ip", "timestamp",
                                              "external ip"};
  return drops;
}

bool is_tcp_tagged(const std::string& normalized_name) {
  return normalized_name.find("flag") != std::string::npos ||
         normalized_name.find("init win bytes") != std::string::npos ||
         normalized_name.find("win bytes") != std::string::npos;
}

bool is_semantic_default(const std::string& normalized_name) {
  return normalized_name == "destination port" || normalized_name == "protocol";
}

}  // namespace

std::string merge_cicids_classes(const std::string& raw_label) {
  auto it = cicids_subclass_map().find(normalize_token(raw_label));
  if (it == cicids_subclass_map().end())
    throw std::invalid_argument("label not in the published CICIDS-2017 class set: " + raw_label);
  return it->second;
}

LoadResult load_cicids(const std::vector<std::string>& paths, std::uint64_t split_seed,
                       double train_fraction) {
  if (paths.empty()) throw std::invalid_argument("load_cicids: no input files");
  LoadResult result;
  auto& report = result.report;

  std::vector<std::string> header;       // kept feature column names, in file order
  std::vector<std::size_t> kept_cols;    // indices into raw rows
  std::size_t label_col = 0;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  const auto& label_set = cicids_label_set();

  bool header_done = false;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CICIDS file: " + path);
    std::string line;
    std::size_t row_no = 0;
    bool file_header = false;
    std::vector<std::size_t> col_map;  // this file's raw index per kept feature
    std::size_t file_label_col = 0;
    std::size_t file_width = 0;
    while (std::getline(in, line)) {
      ++row_no;
      if (trim(line).empty()) continue;
      auto fields = split_csv_line(line);
      if (!file_header) {
        // header row
        file_header = true;
        file_width = fields.size();
        std::vector<std::string> names(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) names[c] = normalize_token(fields[c]);
        auto label_it = std::find(names.begin(), names.end(), "label");
        if (label_it == names.end())
          throw std::runtime_error(path + ": no Label column in header");
        file_label_col = static_cast<std::size_t>(label_it - names.begin());
        if (!header_done) {
          for (std::size_t c = 0; c < names.size(); ++c) {
            if (c == file_label_col) continue;
            if (manifest_drops().count(names[c])) {
              report.dropped_columns.push_back(names[c] + ": identifier/timestamp (manifest)");
              continue;
            }
            header.push_back(names[c]);
            kept_cols.push_back(c);
          }
          label_col = file_label_col;
          header_done = true;
          col_map = kept_cols;
        } else {
          // later files must expose the same kept columns (by name)
          col_map.clear();
          for (const auto& name : header) {
            auto it = std::find(names.begin(), names.end(), name);
            if (it == names.end())
              throw std::runtime_error(path + ": missing column '" + name + "'");
            col_map.push_back(static_cast<std::size_t>(it - names.begin()));
          }
        }
        continue;
      }
      if (fields.size() != file_width) {
        report.rejected_rows.push_back(path + ":" + std::to_string(row_no) + ": expected " +
                                       std::to_string(file_width) + " fields, got " +
                                       std::to_string(fields.size()));
        continue;
      }
      const std::string merged = merge_cicids_classes(fields[file_label_col]);
      std::vector<double> vals(header.size());
      bool ok = true;
      for (std::size_t k = 0; k < header.size() && ok; ++k) {
        if (!parse_double(fields[col_map[k]], vals[k])) {
          report.rejected_rows.push_back(path + ":" + std::to_string(row_no) +
                                         ": unparseable value in '" + header[k] + "'");
          ok = false;
        }
      }
      if (!ok) continue;
      rows.push_back(std::move(vals));
      labels.push_back(static_cast<int>(
          std::find(label_set.begin(), label_set.end(), merged) - label_set.begin()));
    }
    if (!file_header) throw std::runtime_error(path + ": empty file");
  }
  (void)label_col;
  if (rows.empty()) throw std::runtime_error("load_cicids: no usable rows");

  // Replace infinities with the column's finite extremes, NaN with 0; drop
  // columns with no finite value at all.
  std::vector<bool> keep(header.size(), true);
  for (std::size_t c = 0; c < header.size(); ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool any_finite = false;
    for (const auto& r : rows) {
      if (std::isfinite(r[c])) {
        any_finite = true;
        lo = std::min(lo, r[c]);
        hi = std::max(hi, r[c]);
      }
    }
    if (!any_finite) {
      keep[c] = false;
      report.dropped_columns.push_back(header[c] + ": no finite values (manifest)");
      continue;
    }
    std::size_t replaced = 0;
    for (auto& r : rows) {
      if (std::isnan(r[c])) {
        r[c] = 0.0;
        ++replaced;
      } else if (std::isinf(r[c])) {
        r[c] = r[c] > 0 ? hi : lo;
        ++replaced;
      }
    }
    if (replaced)
      report.notes.push_back(header[c] + ": replaced " + std::to_string(replaced) +
                             " non-finite values");
  }

  std::vector<std::string> kept_names;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (keep[c]) kept_names.push_back(header[c]);

  Matrix x_raw(rows.size(), kept_names.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::size_t out = 0;
    for (std::size_t c = 0; c < header.size(); ++c)
      if (keep[c]) x_raw(r, out++) = rows[r][c];
  }

  std::vector<FeatureInfo> features(kept_names.size());
  for (std::size_t c = 0; c < kept_names.size(); ++c) {
    features[c].name = kept_names[c];
    features[c].kind = FeatureKind::numeric;
    if (is_tcp_tagged(kept_names[c])) features[c].protocol_tag = "tcp";
    features[c].attack_semantic = is_semantic_default(kept_names[c]);
  }
  FeatureSchema schema = build_schema(std::move(features), {});
  schema.known_classes = label_set;

  auto [train_idx, test_idx] = stratified_split_indices(labels, train_fraction, split_seed);

  auto gather = [&](const std::vector<std::size_t>& idx) {
    Matrix x(idx.size(), x_raw.cols());
    std::vector<int> y(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t c = 0; c < x_raw.cols(); ++c) x(i, c) = x_raw(idx[i], c);
      y[i] = labels[idx[i]];
    }
    return std::make_pair(std::move(x), std::move(y));
  };
  auto [train_x_raw, train_y] = gather(train_idx);
  auto [test_x_raw, test_y] = gather(test_idx);

  auto [train_x, stats] = minmax_scale(train_x_raw);
  auto [test_x, s2] = minmax_scale(test_x_raw, &stats);

  auto finish = [&](Matrix&& x, std::vector<int>&& y, SplitTag tag) {
    FlowDataset d;
    d.schema = schema;
    d.X = std::move(x);
    d.y = std::move(y);
    d.label_set = label_set;
    d.benign_index = 0;
    d.scaling_stats = stats;
    d.split_tag = tag;
    d.seed = split_seed;
    d.source = "cicids";
    return d;
  };
  result.train = finish(std::move(train_x), std::move(train_y), SplitTag::train);
  result.test = finish(std::move(test_x), std::move(test_y), SplitTag::test);
  result.train.validate();
  result.test.validate();
  report.notes.push_back("kept " + std::to_string(kept_names.size()) + " feature columns");
  report.notes.push_back("split seed " + std::to_string(split_seed));
  return result;
}

}  // namespace flowevade::flows
