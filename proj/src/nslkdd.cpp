#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "flowevade/loaders.hpp"
#include "flowevade/textutil.hpp"

namespace flowevade::flows {

std::string LoadReport::to_text() const {
  std::ostringstream os;
  os << "dropped_columns: " << dropped_columns.size() << "\n";
  for (const auto& s : dropped_columns) os << "  " << s << "\n";
  os << "unknown_levels: " << unknown_levels.size() << "\n";
  for (const auto& s : unknown_levels) os << "  " << s << "\n";
  os << "rejected_rows: " << rejected_rows.size() << "\n";
  for (const auto& s : rejected_rows) os << "  " << s << "\n";
  os << "notes: " << notes.size() << "\n";
  for (const auto& s : notes) os << "  " << s << "\n";
  return os.str();
}

namespace {

constexpr std::size_t kNslFeatures = 41;
constexpr std::size_t kProtocolCol = 1;
constexpr std::size_t kServiceCol = 2;
constexpr std::size_t kFlagCol = 3;

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = {
      "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes", "land",
      "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in", "num_compromised",
      "root_shell", "su_attempted", "num_root", "num_file_creations", "num_shells",
      "num_access_files", "num_outbound_cmds", "is_host_login", "is_guest_login", "count",
      "srv_count", "serror_rate", "srv_serror_rate", "rerror_rate", "srv_rerror_rate",
      "same_srv_rate", "diff_srv_rate", "srv_diff_host_rate", "dst_host_count",
      "dst_host_srv_count", "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
      "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate", "dst_host_serror_rate",
      "dst_host_srv_serror_rate", "dst_host_rerror_rate", "dst_host_srv_rerror_rate"};
  return names;
}

// SYN/REJ error statistics and the urgent-pointer counter only exist for TCP.
const std::set<std::string>& tcp_tagged() {
  static const std::set<std::string> tags = {
      "flag", "urgent", "serror_rate", "srv_serror_rate", "rerror_rate", "srv_rerror_rate",
      "dst_host_serror_rate", "dst_host_srv_serror_rate", "dst_host_rerror_rate",
      "dst_host_srv_rerror_rate"};
  return tags;
}

// Content features describing what the connection did; perturbing them
// rewrites the attack itself. Override per class via schema.semantic_overrides.
const std::set<std::string>& semantic_defaults() {
  static const std::set<std::string> names = {
      "land", "wrong_fragment", "hot", "num_failed_logins", "logged_in", "num_compromised",
      "root_shell", "su_attempted", "num_root", "num_file_creations", "num_shells",
      "num_access_files", "num_outbound_cmds", "is_host_login", "is_guest_login"};
  return names;
}

struct RawRecord {
  std::vector<std::string> fields;  // 41 feature fields
  int label = 0;
};

const std::map<std::string, std::string>& nslkdd_subclass_map() {
  static const std::map<std::string, std::string> m = {
      {"normal", "Benign"}, {"benign", "Benign"},
      // DoS
      {"apache2", "DoS"}, {"back", "DoS"}, {"land", "DoS"}, {"neptune", "DoS"},
      {"mailbomb", "DoS"}, {"pod", "DoS"}, {"processtable", "DoS"}, {"smurf", "DoS"},
      {"teardrop", "DoS"}, {"udpstorm", "DoS"}, {"worm", "DoS"},
      // Probe
      {"ipsweep", "Probe"}, {"mscan", "Probe"}, {"nmap", "Probe"}, {"portsweep", "Probe"},
      {"saint", "Probe"}, {"satan", "Probe"},
      // U2R
      {"buffer overflow", "U2R"}, {"loadmodule", "U2R"}, {"perl", "U2R"}, {"ps", "U2R"},
      {"rootkit", "U2R"}, {"sqlattack", "U2R"}, {"xterm", "U2R"},
      // R2L
      {"ftp write", "R2L"}, {"guess passwd", "R2L"}, {"httptunnel", "R2L"}, {"imap", "R2L"},
      {"multihop", "R2L"}, {"named", "R2L"}, {"phf", "R2L"}, {"sendmail", "R2L"},
      {"snmpgetattack", "R2L"}, {"spy", "R2L"}, {"snmpguess", "R2L"}, {"warezclient", "R2L"},
      {"warezmaster", "R2L"}, {"xlock", "R2L"}, {"xsnoop", "R2L"}};
  return m;
}

const std::vector<std::string>& nsl_label_set() {
  static const std::vector<std::string> labels = {"Benign", "DoS", "Probe", "R2L", "U2R"};
  return labels;
}

std::vector<RawRecord> read_records(const std::string& path, const std::string& tag,
                                    LoadReport& report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open NSL-KDD file: " + path);
  std::vector<RawRecord> records;
  std::string line;
  std::size_t row = 0;
  const auto& labels = nsl_label_set();
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    // 41 features + label, trailing difficulty column tolerated and dropped
    if (fields.size() != kNslFeatures + 1 && fields.size() != kNslFeatures + 2) {
      report.rejected_rows.push_back(tag + ":" + std::to_string(row) + ": expected " +
                                     std::to_string(kNslFeatures + 1) + " or " +
                                     std::to_string(kNslFeatures + 2) + " fields, got " +
                                     std::to_string(fields.size()));
      continue;
    }
    const std::string sub = normalize_token(fields[kNslFeatures]);
    auto it = nslkdd_subclass_map().find(sub);
    if (it == nslkdd_subclass_map().end()) {
      report.rejected_rows.push_back(tag + ":" + std::to_string(row) + ": unknown label '" +
                                     fields[kNslFeatures] + "'");
      continue;
    }
    bool ok = true;
    for (std::size_t f = 0; f < kNslFeatures && ok; ++f) {
      if (f == kProtocolCol || f == kServiceCol || f == kFlagCol) continue;
      double v;
      if (!parse_double(fields[f], v) || !std::isfinite(v)) {
        report.rejected_rows.push_back(tag + ":" + std::to_string(row) + ": bad numeric in '" +
                                       feature_names()[f] + "'");
        ok = false;
      }
    }
    if (!ok) continue;
    RawRecord rec;
    rec.fields.assign(fields.begin(), fields.begin() + kNslFeatures);
    for (auto& fld : rec.fields) fld = trim(fld);
    rec.label = static_cast<int>(std::find(labels.begin(), labels.end(), it->second) -
                                 labels.begin());
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace

std::string merge_nslkdd_classes(const std::string& raw_label) {
  auto it = nslkdd_subclass_map().find(normalize_token(raw_label));
  if (it == nslkdd_subclass_map().end())
    throw std::invalid_argument("unknown NSL-KDD label: " + raw_label);
  return it->second;
}

const std::vector<std::string>& nslkdd_feature_names() { return feature_names(); }

LoadResult load_nslkdd(const std::string& train_path, const std::string& test_path) {
  LoadResult result;
  auto& report = result.report;
  auto train_records = read_records(train_path, "train", report);
  auto test_records = read_records(test_path, "test", report);
  if (train_records.empty()) throw std::runtime_error("NSL-KDD train file has no usable rows");

  // Categorical levels are whatever the train split contains, sorted.
  const std::size_t cat_cols[] = {kProtocolCol, kServiceCol, kFlagCol};
  std::vector<std::vector<std::string>> levels;
  for (std::size_t cat : cat_cols) {
    std::set<std::string> seen;
    for (const auto& rec : train_records) seen.insert(rec.fields[cat]);
    levels.emplace_back(seen.begin(), seen.end());
  }

  std::vector<FeatureInfo> features(kNslFeatures);
  for (std::size_t f = 0; f < kNslFeatures; ++f) {
    features[f].name = feature_names()[f];
    if (f == kProtocolCol || f == kServiceCol || f == kFlagCol) {
      features[f].kind = FeatureKind::categorical;
      features[f].attack_semantic = true;  // identity of the connection
    } else {
      features[f].kind = FeatureKind::numeric;
      features[f].attack_semantic = semantic_defaults().count(feature_names()[f]) > 0;
    }
    if (tcp_tagged().count(feature_names()[f])) features[f].protocol_tag = "tcp";
  }
  FeatureSchema schema = build_schema(std::move(features), levels);
  schema.known_classes = nsl_label_set();

  auto encode = [&](const std::vector<RawRecord>& records, const std::string& tag) {
    Matrix x(records.size(), schema.n_encoded);
    std::vector<int> y(records.size());
    for (std::size_t r = 0; r < records.size(); ++r) {
      const auto& rec = records[r];
      std::size_t cat_seen = 0;
      for (std::size_t f = 0; f < kNslFeatures; ++f) {
        const auto& range = schema.encoded_ranges[f];
        if (schema.features[f].kind == FeatureKind::categorical) {
          const auto& lv = schema.categorical_levels[cat_seen];
          auto it = std::find(lv.begin(), lv.end(), rec.fields[f]);
          if (it == lv.end()) {
            // novel test-time level: the whole group stays zero
            report.unknown_levels.push_back(tag + ": feature '" + schema.features[f].name +
                                            "' level '" + rec.fields[f] + "' row " +
                                            std::to_string(r));
          } else {
            x(r, range.begin + static_cast<std::size_t>(it - lv.begin())) = 1.0;
          }
          ++cat_seen;
        } else {
          double v = 0.0;
          parse_double(rec.fields[f], v);
          x(r, range.begin) = v;
        }
      }
      y[r] = rec.label;
    }
    return std::make_pair(std::move(x), std::move(y));
  };

  auto [train_x_raw, train_y] = encode(train_records, "train");
  auto [test_x_raw, test_y] = encode(test_records, "test");

  // Numeric columns get train-split min-max stats; one-hot columns are kept
  // as-is by pinning their stats to [0,1].
  auto [ignored, stats] = minmax_scale(train_x_raw);
  (void)ignored;
  for (const auto& g : schema.one_hot_groups) {
    for (std::size_t e = g.begin; e < g.end; ++e) {
      stats.min[e] = 0.0;
      stats.max[e] = 1.0;
    }
  }
  auto [train_x, s1] = minmax_scale(train_x_raw, &stats);
  auto [test_x, s2] = minmax_scale(test_x_raw, &stats);

  auto finish = [&](Matrix&& x, std::vector<int>&& y, SplitTag tag) {
    FlowDataset d;
    d.schema = schema;
    d.X = std::move(x);
    d.y = std::move(y);
    d.label_set = nsl_label_set();
    d.benign_index = 0;
    d.scaling_stats = stats;
    d.split_tag = tag;
    d.source = "nslkdd";
    return d;
  };
  result.train = finish(std::move(train_x), std::move(train_y), SplitTag::train);
  result.test = finish(std::move(test_x), std::move(test_y), SplitTag::test);
  result.train.validate();
  result.test.validate();
  report.notes.push_back("encoded width " + std::to_string(schema.n_encoded));
  return result;
}

}  // namespace flowevade::flows
