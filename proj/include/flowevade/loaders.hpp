#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "flowevade/dataset.hpp"

namespace flowevade::flows {

/// What a loader dropped, rejected, or remapped; persisted next to the
/// emitted datasets so a run can be audited.
struct LoadReport {
  std::vector<std::string> dropped_columns;  // "name: reason"
  std::vector<std::string> unknown_levels;   // test-time categorical levels mapped to zero groups
  std::vector<std::string> rejected_rows;    // "file:row: reason"
  std::vector<std::string> notes;

  std::string to_text() const;
};

struct LoadResult {
  FlowDataset train;
  FlowDataset test;
  LoadReport report;
};

/// NSL-KDD record layout: 41 feature columns + label (+ optional difficulty
/// column, dropped). Categorical levels are data-driven from the train file;
/// novel test levels encode as all-zero groups. Scaling statistics come from
/// the train split only.
LoadResult load_nslkdd(const std::string& train_path, const std::string& test_path);

inline constexpr std::uint64_t kCicidsDefaultSplitSeed = 20170705;

/// CICIDS-2017 flow exports with a header row and the published 14-class
/// labels. Applies the cleaning manifest (identifier/timestamp columns
/// dropped, infinities replaced, all-non-finite columns dropped), merges
/// labels to 7 classes and splits 75/25 stratified under `split_seed`.
LoadResult load_cicids(const std::vector<std::string>& paths,
                       std::uint64_t split_seed = kCicidsDefaultSplitSeed,
                       double train_fraction = 0.75);

/// Published CICIDS-2017 subclass name -> 7-class name
/// (Benign, Bot, Pat, DoS, Inf, Port, Web). Throws on unknown labels.
std::string merge_cicids_classes(const std::string& raw_label);

/// NSL-KDD attack subclass -> 5-class name (Benign, DoS, Probe, R2L, U2R).
/// Throws on unknown labels.
std::string merge_nslkdd_classes(const std::string& raw_label);

const std::vector<std::string>& nslkdd_feature_names();

}  // namespace flowevade::flows
