#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace flowevade::flows {

enum class FeatureKind { numeric, categorical, binary_flag };

struct FeatureInfo {
  std::string name;
  FeatureKind kind = FeatureKind::numeric;
  std::string protocol_tag;  // empty = protocol-agnostic
  bool attack_semantic = false;
};

struct IndexRange {
  std::size_t begin = 0;  // inclusive
  std::size_t end = 0;    // exclusive
  std::size_t width() const { return end - begin; }
};

/// Per-feature metadata in raw (pre-encoding) order plus the mapping into
/// encoded space. Encoded layout: each raw feature occupies a contiguous
/// range, width 1 for numeric/flag features and one column per level for
/// categorical ones.
struct FeatureSchema {
  std::vector<FeatureInfo> features;
  std::size_t n_raw = 0;
  std::size_t n_encoded = 0;
  /// Encoded index ranges of the one-hot groups, one per categorical raw
  /// feature, in feature order.
  std::vector<IndexRange> one_hot_groups;
  /// Encoded range of every raw feature (width 1 unless categorical).
  std::vector<IndexRange> encoded_ranges;
  /// Categorical level names per categorical feature, aligned with
  /// one_hot_groups; level i maps to column group.begin + i.
  std::vector<std::vector<std::string>> categorical_levels;
  /// Class names this schema knows about; empty means "accept any".
  std::vector<std::string> known_classes;
  /// Extra per-class frozen features (by raw feature name) on top of the
  /// global attack_semantic flags.
  std::map<std::string, std::vector<std::string>> semantic_overrides;

  /// Raw feature index owning an encoded column.
  std::size_t raw_of_encoded(std::size_t encoded_index) const;

  /// Encoded indices whose raw feature carries attack semantics for the
  /// given class (global flags plus overrides).
  std::vector<std::size_t> semantic_encoded_indices(const std::string& attack_class) const;

  std::optional<std::size_t> feature_index(const std::string& name) const;

  /// Throws if the invariants on group layout do not hold.
  void validate() const;
};

/// Assigns encoded_ranges / one_hot_groups / counts from `features` and the
/// level lists of the categorical features (given in feature order).
FeatureSchema build_schema(std::vector<FeatureInfo> features,
                           std::vector<std::vector<std::string>> levels_per_categorical);

}  // namespace flowevade::flows
