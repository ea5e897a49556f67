#include "flowevade/nn_io.hpp"

#include <stdexcept>

namespace flowevade::nn {

using nlohmann::json;

namespace {

const char* act_name(Act a) {
  switch (a) {
    case Act::identity: return "identity";
    case Act::relu: return "relu";
    case Act::leaky_relu: return "leaky-relu";
    case Act::tanh_bounded: return "tanh";
    case Act::sigmoid: return "sigmoid";
  }
  return "identity";
}

Act act_from_name(const std::string& s) {
  if (s == "identity") return Act::identity;
  if (s == "relu") return Act::relu;
  if (s == "leaky-relu") return Act::leaky_relu;
  if (s == "tanh") return Act::tanh_bounded;
  if (s == "sigmoid") return Act::sigmoid;
  throw std::invalid_argument("unknown activation: " + s);
}

}  // namespace

json mlp_spec_to_json(const MlpSpec& s) {
  return json{{"widths", s.widths},
              {"hidden_act", act_name(s.hidden_act)},
              {"output_act", act_name(s.output_act)},
              {"leaky_slope", s.leaky_slope},
              {"batch_norm", s.batch_norm},
              {"dropout", s.dropout}};
}

MlpSpec mlp_spec_from_json(const json& j) {
  MlpSpec s;
  s.widths = j.at("widths").get<std::vector<std::size_t>>();
  s.hidden_act = act_from_name(j.at("hidden_act").get<std::string>());
  s.output_act = act_from_name(j.at("output_act").get<std::string>());
  s.leaky_slope = j.at("leaky_slope").get<double>();
  s.batch_norm = j.at("batch_norm").get<bool>();
  s.dropout = j.at("dropout").get<double>();
  return s;
}

json mlp_to_json(const Mlp& net) {
  json running = json::array();
  if (net.spec().batch_norm) {
    for (std::size_t l = 0; l + 1 < net.n_dense(); ++l) {
      running.push_back({{"mean", net.norm(l).running_mean}, {"var", net.norm(l).running_var}});
    }
  }
  return json{{"spec", mlp_spec_to_json(net.spec())},
              {"params", net.flat_params()},
              {"running", running}};
}

Mlp mlp_from_json(const json& j) {
  MlpSpec spec = mlp_spec_from_json(j.at("spec"));
  Rng dummy(0);
  Mlp net(spec, dummy);
  net.set_flat_params(j.at("params").get<std::vector<double>>());
  if (spec.batch_norm) {
    const auto& running = j.at("running");
    for (std::size_t l = 0; l + 1 < net.n_dense(); ++l) {
      net.norm_mutable(l).running_mean = running.at(l).at("mean").get<std::vector<double>>();
      net.norm_mutable(l).running_var = running.at(l).at("var").get<std::vector<double>>();
    }
  }
  return net;
}

}  // namespace flowevade::nn
