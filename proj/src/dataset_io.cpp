#include "flowevade/dataset_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace flowevade::flows {

using nlohmann::json;

namespace {

constexpr const char* kMagic = "FLOWEVADE-DATASET v1";

const char* kind_name(FeatureKind k) {
  switch (k) {
    case FeatureKind::numeric: return "numeric";
    case FeatureKind::categorical: return "categorical";
    case FeatureKind::binary_flag: return "binary-flag";
  }
  return "numeric";
}

FeatureKind kind_from_name(const std::string& s) {
  if (s == "numeric") return FeatureKind::numeric;
  if (s == "categorical") return FeatureKind::categorical;
  if (s == "binary-flag") return FeatureKind::binary_flag;
  throw std::invalid_argument("unknown feature kind: " + s);
}

}  // namespace

json schema_to_json(const FeatureSchema& schema) {
  json feats = json::array();
  for (const auto& f : schema.features) {
    feats.push_back({{"name", f.name},
                     {"kind", kind_name(f.kind)},
                     {"protocol_tag", f.protocol_tag},
                     {"attack_semantic", f.attack_semantic}});
  }
  json overrides = json::object();
  for (const auto& [cls, names] : schema.semantic_overrides) overrides[cls] = names;
  return json{{"features", feats},
              {"categorical_levels", schema.categorical_levels},
              {"known_classes", schema.known_classes},
              {"semantic_overrides", overrides}};
}

FeatureSchema schema_from_json(const json& j) {
  std::vector<FeatureInfo> features;
  for (const auto& f : j.at("features")) {
    FeatureInfo info;
    info.name = f.at("name").get<std::string>();
    info.kind = kind_from_name(f.at("kind").get<std::string>());
    info.protocol_tag = f.at("protocol_tag").get<std::string>();
    info.attack_semantic = f.at("attack_semantic").get<bool>();
    features.push_back(std::move(info));
  }
  std::vector<std::vector<std::string>> levels =
      j.at("categorical_levels").get<std::vector<std::vector<std::string>>>();
  FeatureSchema schema = build_schema(std::move(features), std::move(levels));
  schema.known_classes = j.at("known_classes").get<std::vector<std::string>>();
  if (j.contains("semantic_overrides")) {
    for (const auto& [cls, names] : j.at("semantic_overrides").items())
      schema.semantic_overrides[cls] = names.get<std::vector<std::string>>();
  }
  return schema;
}

void save_dataset(const FlowDataset& dataset, const std::string& path) {
  json header{{"source", dataset.source},
              {"split", dataset.split_tag == SplitTag::train ? "train" : "test"},
              {"seed", dataset.seed},
              {"n_rows", dataset.rows()},
              {"n_cols", dataset.width()},
              {"label_set", dataset.label_set},
              {"benign_index", dataset.benign_index},
              {"scaling", {{"min", dataset.scaling_stats.min}, {"max", dataset.scaling_stats.max}}},
              {"schema", schema_to_json(dataset.schema)}};
  const std::string head = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset: " + path);
  out << kMagic << "\n" << head.size() << "\n" << head;
  // column-major doubles, then labels
  std::vector<double> col(dataset.rows());
  for (std::size_t c = 0; c < dataset.width(); ++c) {
    for (std::size_t r = 0; r < dataset.rows(); ++r) col[r] = dataset.X(r, c);
    out.write(reinterpret_cast<const char*>(col.data()),
              static_cast<std::streamsize>(col.size() * sizeof(double)));
  }
  std::vector<std::int32_t> labels(dataset.y.begin(), dataset.y.end());
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size() * sizeof(std::int32_t)));
  if (!out) throw std::runtime_error("short write: " + path);
}

FlowDataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  std::string magic;
  std::getline(in, magic);
  if (magic != kMagic) throw std::runtime_error(path + ": not a dataset container");
  std::string len_line;
  std::getline(in, len_line);
  const auto head_len = static_cast<std::size_t>(std::stoull(len_line));
  std::string head(head_len, '\0');
  in.read(head.data(), static_cast<std::streamsize>(head_len));
  const json header = json::parse(head);

  FlowDataset d;
  d.source = header.at("source").get<std::string>();
  d.split_tag = header.at("split").get<std::string>() == "train" ? SplitTag::train : SplitTag::test;
  d.seed = header.at("seed").get<std::uint64_t>();
  d.label_set = header.at("label_set").get<std::vector<std::string>>();
  d.benign_index = header.at("benign_index").get<int>();
  d.scaling_stats.min = header.at("scaling").at("min").get<std::vector<double>>();
  d.scaling_stats.max = header.at("scaling").at("max").get<std::vector<double>>();
  d.schema = schema_from_json(header.at("schema"));
  const auto n_rows = header.at("n_rows").get<std::size_t>();
  const auto n_cols = header.at("n_cols").get<std::size_t>();

  d.X = Matrix(n_rows, n_cols);
  std::vector<double> col(n_rows);
  for (std::size_t c = 0; c < n_cols; ++c) {
    in.read(reinterpret_cast<char*>(col.data()),
            static_cast<std::streamsize>(n_rows * sizeof(double)));
    for (std::size_t r = 0; r < n_rows; ++r) d.X(r, c) = col[r];
  }
  std::vector<std::int32_t> labels(n_rows);
  in.read(reinterpret_cast<char*>(labels.data()),
          static_cast<std::streamsize>(n_rows * sizeof(std::int32_t)));
  if (!in) throw std::runtime_error(path + ": truncated dataset container");
  d.y.assign(labels.begin(), labels.end());
  d.validate();
  return d;
}

}  // namespace flowevade::flows
