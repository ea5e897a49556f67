#pragma once

#include <string>

#include <json.hpp>

#include "flowevade/dataset.hpp"

namespace flowevade::flows {

nlohmann::json schema_to_json(const FeatureSchema& schema);
FeatureSchema schema_from_json(const nlohmann::json& j);

/// Columnar container: a magic line, a JSON header (schema, label set,
/// scaling stats, split tag, seed, source), then raw little-endian doubles
/// column by column followed by int32 labels.
void save_dataset(const FlowDataset& dataset, const std::string& path);
FlowDataset load_dataset(const std::string& path);

}  // namespace flowevade::flows
