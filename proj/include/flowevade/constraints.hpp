#pragma once

#include <string>
#include <vector>

#include "flowevade/dataset.hpp"
#include "flowevade/schema.hpp"

namespace flowevade::constraints {

using flows::FeatureSchema;
using flows::FlowDataset;

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

/// Frozen-feature mask plus the per-class valid feature ranges an emitted
/// flow must stay inside. Immutable value object.
struct ConstraintProfile {
  std::string attack_class;
  std::vector<double> mask;   // 0/1 per encoded column
  std::vector<Range> ranges;  // scaled space
  std::string provenance;     // dataset identity
  std::size_t class_samples = 0;

  std::size_t width() const { return mask.size(); }
  void validate(const FeatureSchema* schema = nullptr) const;
};

struct ComplianceReport {
  bool passed = false;
  std::vector<std::size_t> mask_violations;
  std::vector<std::size_t> semantic_drift;  // changed semantic features (subset of mask zeros)
  struct RangeViolation {
    std::size_t index;
    double value;
    Range range;
  };
  std::vector<RangeViolation> range_violations;
};

/// Mask with zeros on attack-semantic features, on features tagged with a
/// protocol other than the flow's, and on every one-hot column. Empty
/// protocol means no protocol-based masking.
std::vector<double> build_mask(const FeatureSchema& schema, const std::string& attack_class,
                               const std::string& protocol = "");

/// Hadamard product of a perturbation with the mask.
std::vector<double> apply_mask(const std::vector<double>& delta, const std::vector<double>& mask);

/// Per-feature min/max over the class's samples in `dataset` (train split).
std::vector<Range> compute_valid_ranges(const FlowDataset& dataset,
                                        const std::string& attack_class);

std::vector<double> clip_to_ranges(const std::vector<double>& x_star,
                                   const std::vector<Range>& ranges);

/// passed iff x_star equals x_orig on every masked coordinate and lies
/// inside the ranges componentwise.
ComplianceReport validate_flow(const std::vector<double>& x_orig,
                               const std::vector<double>& x_star,
                               const ConstraintProfile& profile,
                               const FeatureSchema* schema = nullptr);

ConstraintProfile build_profile(const FlowDataset& train, const std::string& attack_class,
                                const std::string& protocol = "");

/// Profiles serialize to JSON text (class, zero-mask index list, ranges) so
/// experiments can pin and diff them.
std::string profile_to_text(const ConstraintProfile& profile);
ConstraintProfile profile_from_text(const std::string& text);
void save_profile(const ConstraintProfile& profile, const std::string& path);
ConstraintProfile load_profile(const std::string& path);

}  // namespace flowevade::constraints
