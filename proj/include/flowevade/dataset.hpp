#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "flowevade/matrix.hpp"
#include "flowevade/schema.hpp"

namespace flowevade::flows {

struct ScalingStats {
  std::vector<double> min;
  std::vector<double> max;
  bool empty() const { return min.empty(); }
};

enum class SplitTag { train, test };

/// Encoded, scaled flow vectors with labels. Immutable after construction;
/// safe to share read-only across threads.
struct FlowDataset {
  FeatureSchema schema;
  Matrix X;                          // rows in [0,1]^n_encoded
  std::vector<int> y;                // indices into label_set
  std::vector<std::string> label_set;
  int benign_index = 0;
  ScalingStats scaling_stats;        // train-split min/max per encoded column
  SplitTag split_tag = SplitTag::train;
  std::uint64_t seed = 0;            // seed recorded for provenance
  std::string source;                // dataset identity, e.g. "synthetic"

  std::size_t rows() const { return X.rows(); }
  std::size_t width() const { return X.cols(); }
  const std::string& benign_label() const { return label_set[benign_index]; }
  int label_index(const std::string& name) const;
  std::vector<std::size_t> indices_of_class(int label) const;
  std::vector<std::size_t> indices_of_class(const std::string& name) const;

  /// Row-subset copy preserving metadata (order follows `idx`).
  FlowDataset subset(const std::vector<std::size_t>& idx) const;
  void validate() const;
};

/// Min-max scaling. With fresh stats each column maps by (v-min)/(max-min)
/// and constant columns map to 0; with supplied (train) stats outputs are
/// clamped to [0,1].
std::pair<Matrix, ScalingStats> minmax_scale(const Matrix& x_raw, const ScalingStats* stats = nullptr);

/// Exact stratified split: per-class counts of the two parts always sum to
/// the input counts, train share of each class is round(fraction * count)
/// (at least 1 each side where the class allows it).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split_indices(
    const std::vector<int>& y, double train_fraction, std::uint64_t seed);

struct SyntheticSpec {
  std::size_t n_features = 20;
  std::size_t n_classes = 2;
  std::vector<std::size_t> per_class_counts;  // one entry per class
  double separation = 3.0;                    // centroid distance in blob-sigma units
  double frozen_fraction = 0.25;              // share of features marked attack_semantic
  double sigma = 0.08;                        // blob standard deviation before scaling
  double train_fraction = 0.75;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Gaussian-blob stand-in for the flow benchmarks: class 0 is the benign
/// class, features have no one-hot groups, a deterministic subset of
/// features is marked attack_semantic.
std::pair<FlowDataset, FlowDataset> synthetic_dataset(const SyntheticSpec& spec);

}  // namespace flowevade::flows
