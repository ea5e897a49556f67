#include "flowevade/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flowevade/rng.hpp"

namespace flowevade::flows {

int FlowDataset::label_index(const std::string& name) const {
  for (std::size_t i = 0; i < label_set.size(); ++i)
    if (label_set[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("unknown label: " + name);
}

std::vector<std::size_t> FlowDataset::indices_of_class(int label) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] == label) out.push_back(i);
  return out;
}

std::vector<std::size_t> FlowDataset::indices_of_class(const std::string& name) const {
  return indices_of_class(label_index(name));
}

FlowDataset FlowDataset::subset(const std::vector<std::size_t>& idx) const {
  FlowDataset out;
  out.schema = schema;
  out.label_set = label_set;
  out.benign_index = benign_index;
  out.scaling_stats = scaling_stats;
  out.split_tag = split_tag;
  out.seed = seed;
  out.source = source;
  out.X = Matrix(idx.size(), X.cols());
  out.y.resize(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= rows()) throw std::out_of_range("subset: row index out of range");
    for (std::size_t c = 0; c < X.cols(); ++c) out.X(i, c) = X(idx[i], c);
    out.y[i] = y[idx[i]];
  }
  return out;
}

void FlowDataset::validate() const {
  if (y.size() != X.rows()) throw std::logic_error("dataset: label count != row count");
  if (label_set.empty()) throw std::logic_error("dataset: empty label set");
  if (benign_index < 0 || benign_index >= static_cast<int>(label_set.size()))
    throw std::logic_error("dataset: benign index out of range");
  for (double v : X.data())
    if (!(v >= 0.0 && v <= 1.0)) throw std::logic_error("dataset: component outside [0,1]");
  for (int label : y)
    if (label < 0 || label >= static_cast<int>(label_set.size()))
      throw std::logic_error("dataset: label outside label set");
}

std::pair<Matrix, ScalingStats> minmax_scale(const Matrix& x_raw, const ScalingStats* stats) {
  const std::size_t n = x_raw.cols();
  ScalingStats out_stats;
  if (stats) {
    if (stats->min.size() != n || stats->max.size() != n)
      throw std::invalid_argument("minmax_scale: stats width mismatch");
    out_stats = *stats;
  } else {
    out_stats.min.assign(n, 0.0);
    out_stats.max.assign(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      double lo = x_raw.rows() ? x_raw(0, c) : 0.0;
      double hi = lo;
      for (std::size_t r = 1; r < x_raw.rows(); ++r) {
        lo = std::min(lo, x_raw(r, c));
        hi = std::max(hi, x_raw(r, c));
      }
      out_stats.min[c] = lo;
      out_stats.max[c] = hi;
    }
  }
  Matrix scaled(x_raw.rows(), n);
  const bool clamp = stats != nullptr;
  for (std::size_t r = 0; r < x_raw.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double lo = out_stats.min[c], hi = out_stats.max[c];
      double v;
      if (hi == lo) {
        v = 0.0;  // constant feature, kept at width 1 so widths stay stable
      } else {
        v = (x_raw(r, c) - lo) / (hi - lo);
      }
      if (clamp) v = std::clamp(v, 0.0, 1.0);
      scaled(r, c) = v;
    }
  }
  return {std::move(scaled), std::move(out_stats)};
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split_indices(
    const std::vector<int>& y, double train_fraction, std::uint64_t seed) {
  if (train_fraction < 0.0 || train_fraction > 1.0)
    throw std::invalid_argument("stratified_split_indices: fraction outside [0,1]");
  int max_label = -1;
  for (int label : y) max_label = std::max(max_label, label);
  std::vector<std::vector<std::size_t>> per_class(static_cast<std::size_t>(max_label) + 1);
  for (std::size_t i = 0; i < y.size(); ++i) per_class[y[i]].push_back(i);

  Rng rng(seed);
  std::vector<std::size_t> train, test;
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    auto& members = per_class[c];
    Rng class_rng = rng.fork(c);
    class_rng.shuffle(members);
    const auto n_train =
        static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(members.size())));
    for (std::size_t i = 0; i < members.size(); ++i) {
      (i < n_train ? train : test).push_back(members[i]);
    }
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

void SyntheticSpec::validate() const {
  if (n_features == 0 || n_classes == 0) throw std::invalid_argument("synthetic spec: zero sizes");
  if (per_class_counts.size() != n_classes)
    throw std::invalid_argument("synthetic spec: per-class counts must match n_classes");
  for (auto c : per_class_counts)
    if (c == 0) throw std::invalid_argument("synthetic spec: class count must be positive");
  if (separation < 0.0) throw std::invalid_argument("synthetic spec: negative separation");
  if (frozen_fraction < 0.0 || frozen_fraction > 1.0)
    throw std::invalid_argument("synthetic spec: frozen fraction outside [0,1]");
  if (sigma <= 0.0) throw std::invalid_argument("synthetic spec: sigma must be positive");
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    throw std::invalid_argument("synthetic spec: train fraction outside (0,1)");
}

std::pair<FlowDataset, FlowDataset> synthetic_dataset(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_features;
  const std::size_t k = spec.n_classes;
  Rng root(spec.seed);
  Rng center_rng = root.fork(1);
  Rng sample_rng = root.fork(2);
  Rng frozen_rng = root.fork(3);

  // Class centroids: random unit directions re-centered and scaled so the
  // closest pair sits exactly separation*sigma apart.
  Matrix centers(k, n, 0.5);
  if (k > 1 && spec.separation > 0.0) {
    Matrix dirs(k, n);
    for (std::size_t c = 0; c < k; ++c) {
      double norm2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        dirs(c, j) = center_rng.normal();
        norm2 += dirs(c, j) * dirs(c, j);
      }
      const double norm = std::sqrt(norm2);
      for (std::size_t j = 0; j < n; ++j) dirs(c, j) /= norm;
    }
    std::vector<double> mean(n, 0.0);
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t j = 0; j < n; ++j) mean[j] += dirs(c, j) / static_cast<double>(k);
    double min_pair = 0.0;
    bool first = true;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double d = dirs(a, j) - dirs(b, j);
          d2 += d * d;
        }
        const double d = std::sqrt(d2);
        if (first || d < min_pair) min_pair = d;
        first = false;
      }
    }
    if (min_pair <= 1e-12) throw std::runtime_error("synthetic_dataset: degenerate centroids");
    const double scale = spec.separation * spec.sigma / min_pair;
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t j = 0; j < n; ++j)
        centers(c, j) = 0.5 + scale * (dirs(c, j) - mean[j]);
  }

  std::size_t total = 0;
  for (auto cnt : spec.per_class_counts) total += cnt;
  Matrix X(total, n);
  std::vector<int> y(total);
  std::size_t row = 0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < spec.per_class_counts[c]; ++i, ++row) {
      for (std::size_t j = 0; j < n; ++j) {
        X(row, j) = std::clamp(centers(c, j) + spec.sigma * sample_rng.normal(), 0.0, 1.0);
      }
      y[row] = static_cast<int>(c);
    }
  }

  std::vector<FeatureInfo> features(n);
  const auto n_frozen = static_cast<std::size_t>(
      std::llround(spec.frozen_fraction * static_cast<double>(n)));
  auto perm = frozen_rng.permutation(n);
  std::vector<bool> frozen(n, false);
  for (std::size_t i = 0; i < n_frozen; ++i) frozen[perm[i]] = true;
  for (std::size_t j = 0; j < n; ++j) {
    features[j].name = "f" + std::to_string(j);
    features[j].kind = FeatureKind::numeric;
    features[j].attack_semantic = frozen[j];
  }
  FeatureSchema schema = build_schema(std::move(features), {});

  std::vector<std::string> labels;
  labels.push_back("Benign");
  for (std::size_t c = 1; c < k; ++c) labels.push_back("Attack" + std::to_string(c));
  schema.known_classes = labels;

  auto [train_idx, test_idx] = stratified_split_indices(y, spec.train_fraction, spec.seed);

  auto make_split = [&](const std::vector<std::size_t>& idx, SplitTag tag) {
    FlowDataset d;
    d.schema = schema;
    d.label_set = labels;
    d.benign_index = 0;
    d.split_tag = tag;
    d.seed = spec.seed;
    d.source = "synthetic";
    d.X = Matrix(idx.size(), n);
    d.y.resize(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) d.X(i, j) = X(idx[i], j);
      d.y[i] = y[idx[i]];
    }
    return d;
  };
  FlowDataset train = make_split(train_idx, SplitTag::train);
  FlowDataset test = make_split(test_idx, SplitTag::test);

  auto [train_scaled, stats] = minmax_scale(train.X);
  train.X = std::move(train_scaled);
  train.scaling_stats = stats;
  auto [test_scaled, stats2] = minmax_scale(test.X, &stats);
  test.X = std::move(test_scaled);
  test.scaling_stats = stats;

  train.validate();
  test.validate();
  return {std::move(train), std::move(test)};
}

}  // namespace flowevade::flows
