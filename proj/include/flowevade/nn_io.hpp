#pragma once

#include <json.hpp>

#include "flowevade/nn.hpp"

namespace flowevade::nn {

nlohmann::json mlp_spec_to_json(const MlpSpec& spec);
MlpSpec mlp_spec_from_json(const nlohmann::json& j);

/// Full network state: spec, flat parameters, batch-norm running stats.
nlohmann::json mlp_to_json(const Mlp& net);
Mlp mlp_from_json(const nlohmann::json& j);

}  // namespace flowevade::nn
