#include "flowevade/attack.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "flowevade/nn_io.hpp"

namespace flowevade::attack {

using nlohmann::json;

GanVariant variant_from_name(const std::string& name) {
  if (name == "wgan-gp") return GanVariant::wgan_gp;
  if (name == "original-gan") return GanVariant::original_gan;
  throw std::invalid_argument("unknown gan variant: " + name);
}

std::string variant_name(GanVariant variant) {
  return variant == GanVariant::wgan_gp ? "wgan-gp" : "original-gan";
}

void AttackConfig::validate() const {
  if (alpha <= 0.0 || beta <= 0.0 || epsilon <= 0.0 || lambda_gp <= 0.0)
    throw std::invalid_argument("attack config: alpha, beta, epsilon, lambda_gp must be positive");
  if (epochs < 1 || batch_size < 1)
    throw std::invalid_argument("attack config: epochs and batch_size must be >= 1");
  if (critic_steps < 1) throw std::invalid_argument("attack config: critic_steps must be >= 1");
}

double perturbation_loss(const Matrix& delta_batch, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("perturbation_loss: epsilon must be positive");
  if (delta_batch.rows() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t r = 0; r < delta_batch.rows(); ++r) {
    double norm2 = 0.0;
    for (std::size_t c = 0; c < delta_batch.cols(); ++c)
      norm2 += delta_batch(r, c) * delta_batch(r, c);
    total += std::max(0.0, std::sqrt(norm2) - epsilon);
  }
  return total / static_cast<double>(delta_batch.rows());
}

double adversarial_loss(const nids::Classifier& classifier, const Matrix& x_star_batch,
                        int target_class) {
  const Matrix probs = classifier.predict_probs(x_star_batch);
  if (target_class < 0 || static_cast<std::size_t>(target_class) >= probs.cols())
    throw std::invalid_argument("adversarial_loss: target class out of range");
  double total = 0.0;
  for (std::size_t r = 0; r < probs.rows(); ++r)
    total -= std::log(std::max(probs(r, static_cast<std::size_t>(target_class)), 1e-300));
  return probs.rows() ? total / static_cast<double>(probs.rows()) : 0.0;
}

namespace {

/// Per-row l2 norms of the critic's input gradient.
std::vector<double> critic_grad_norms(const nn::Mlp& critic, const Matrix& x) {
  if (critic.output_width() != 1)
    throw std::invalid_argument("gradient penalty: critic must be scalar-valued");
  Matrix ones(x.rows(), 1, 1.0);
  const Matrix grads = critic.input_gradient(x, ones);
  std::vector<double> norms(x.rows());
  for (std::size_t r = 0; r < grads.rows(); ++r) {
    double n2 = 0.0;
    for (std::size_t c = 0; c < grads.cols(); ++c) n2 += grads(r, c) * grads(r, c);
    norms[r] = std::sqrt(n2);
  }
  return norms;
}

void require_piecewise_linear(const nn::Mlp& critic) {
  const auto& spec = critic.spec();
  if (spec.batch_norm || spec.dropout > 0.0)
    throw std::invalid_argument("critic must not use batch norm or dropout");
  if (spec.hidden_act != nn::Act::relu && spec.hidden_act != nn::Act::leaky_relu)
    throw std::invalid_argument("gradient-penalty critic needs piecewise-linear hidden units");
  if (spec.output_act != nn::Act::identity)
    throw std::invalid_argument("gradient-penalty critic needs a linear output");
}

}  // namespace

double gradient_penalty(const nn::Mlp& critic, const Matrix& x_hat_batch, double lambda_gp) {
  const auto norms = critic_grad_norms(critic, x_hat_batch);
  if (norms.empty()) return 0.0;
  double total = 0.0;
  for (double n : norms) total += (n - 1.0) * (n - 1.0);
  return lambda_gp * total / static_cast<double>(norms.size());
}

double critic_loss(const nn::Mlp& critic, const Matrix& x_batch, const Matrix& x_star_batch,
                   const Matrix& x_hat_batch, double lambda_gp, GanVariant variant) {
  if (x_batch.rows() != x_star_batch.rows())
    throw std::invalid_argument("critic_loss: batch length mismatch");
  if (variant == GanVariant::original_gan) {
    const Matrix p_real = critic.forward(x_batch);
    const Matrix p_fake = critic.forward(x_star_batch);
    double loss = 0.0;
    for (std::size_t r = 0; r < p_real.rows(); ++r)
      loss -= std::log(std::max(p_real(r, 0), 1e-300));
    for (std::size_t r = 0; r < p_fake.rows(); ++r)
      loss -= std::log(std::max(1.0 - p_fake(r, 0), 1e-300));
    return p_real.rows() ? loss / static_cast<double>(p_real.rows()) : 0.0;
  }
  const Matrix d_real = critic.forward(x_batch);
  const Matrix d_fake = critic.forward(x_star_batch);
  double mean_real = 0.0, mean_fake = 0.0;
  for (std::size_t r = 0; r < d_real.rows(); ++r) mean_real += d_real(r, 0);
  for (std::size_t r = 0; r < d_fake.rows(); ++r) mean_fake += d_fake(r, 0);
  if (d_real.rows()) {
    mean_real /= static_cast<double>(d_real.rows());
    mean_fake /= static_cast<double>(d_fake.rows());
  }
  return mean_real - mean_fake + gradient_penalty(critic, x_hat_batch, lambda_gp);
}

Matrix generate_delta(const nn::Mlp& generator, const Matrix& x_batch,
                      const ConstraintProfile& profile) {
  if (x_batch.cols() != generator.input_width() || x_batch.cols() != profile.width())
    throw std::invalid_argument("generate_delta: width mismatch");
  Matrix delta = generator.forward(x_batch);
  for (std::size_t r = 0; r < delta.rows(); ++r)
    for (std::size_t c = 0; c < delta.cols(); ++c) delta(r, c) *= profile.mask[c];
  return delta;
}

Matrix generate_adversarial(const nn::Mlp& generator, const Matrix& x_batch,
                            const ConstraintProfile& profile) {
  Matrix delta = generate_delta(generator, x_batch, profile);
  Matrix x_star(x_batch.rows(), x_batch.cols());
  for (std::size_t r = 0; r < x_batch.rows(); ++r) {
    for (std::size_t c = 0; c < x_batch.cols(); ++c) {
      const double v = x_batch(r, c) + delta(r, c);
      x_star(r, c) = std::clamp(v, profile.ranges[c].lo, profile.ranges[c].hi);
    }
  }
  return x_star;
}

nn::MlpGrads gradient_penalty_param_grads(const nn::Mlp& critic, const Matrix& x_hat_batch,
                                          double lambda_gp) {
  require_piecewise_linear(critic);
  const std::size_t n_layers = critic.n_dense();
  const double slope = critic.spec().leaky_slope;
  const nn::Act act = critic.spec().hidden_act;
  nn::MlpGrads grads = critic.zero_grads();
  const std::size_t batch = x_hat_batch.rows();
  if (batch == 0) return grads;

  for (std::size_t r = 0; r < batch; ++r) {
    // forward, keeping the activation-derivative masks
    std::vector<std::vector<double>> acts(n_layers + 1);
    acts[0] = x_hat_batch.row_copy(r);
    std::vector<std::vector<double>> masks(n_layers);  // hidden layers only
    for (std::size_t l = 0; l < n_layers; ++l) {
      const auto& layer = critic.layer(l);
      std::vector<double> z(layer.w.rows());
      for (std::size_t i = 0; i < layer.w.rows(); ++i) {
        double acc = layer.b[i];
        const double* wrow = layer.w.row(i);
        for (std::size_t j = 0; j < acts[l].size(); ++j) acc += wrow[j] * acts[l][j];
        z[i] = acc;
      }
      if (l + 1 < n_layers) {
        masks[l].resize(z.size());
        acts[l + 1].resize(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) {
          masks[l][i] = nn::activate_deriv(act, z[i], 0.0, slope);
          acts[l + 1][i] = nn::activate(act, z[i], slope);
        }
      } else {
        acts[l + 1] = z;
      }
    }

    // backward chain to the input gradient g
    std::vector<std::vector<double>> v(n_layers + 1);  // v[l]: gradient at layer l's output
    v[n_layers] = {1.0};
    for (std::size_t l = n_layers; l-- > 0;) {
      const auto& layer = critic.layer(l);
      std::vector<double> t(layer.w.cols(), 0.0);  // W_l^T v_{l+1}
      for (std::size_t i = 0; i < layer.w.rows(); ++i) {
        const double vi = v[l + 1][i];
        if (vi == 0.0) continue;
        const double* wrow = layer.w.row(i);
        for (std::size_t j = 0; j < layer.w.cols(); ++j) t[j] += wrow[j] * vi;
      }
      if (l > 0) {
        for (std::size_t j = 0; j < t.size(); ++j) t[j] *= masks[l - 1][j];
      }
      v[l] = std::move(t);
    }
    const std::vector<double>& g = v[0];
    double norm2 = 0.0;
    for (double gv : g) norm2 += gv * gv;
    const double norm = std::sqrt(norm2);

    // d penalty / d g; the norm is non-differentiable at exactly 0, where the
    // zero subgradient is used
    std::vector<double> u(g.size(), 0.0);
    if (norm > 0.0) {
      const double coeff = 2.0 * lambda_gp * (norm - 1.0) / norm;
      for (std::size_t j = 0; j < g.size(); ++j) u[j] = coeff * g[j];
    }

    // reverse accumulation through the chain g = W_1^T M_1 W_2^T ... W_L^T 1.
    // The masks are piecewise-constant so they carry no parameter gradient.
    std::vector<double> vbar = u;  // gradient wrt v[l] being consumed
    for (std::size_t l = 0; l < n_layers; ++l) {
      const auto& layer = critic.layer(l);
      if (l > 0) {
        for (std::size_t j = 0; j < vbar.size(); ++j) vbar[j] *= masks[l - 1][j];
      }
      // dP/dW_l += outer(v_{l+1}, vbar)
      auto& dw = grads.dw[l];
      for (std::size_t i = 0; i < layer.w.rows(); ++i) {
        const double vi = v[l + 1][i];
        if (vi == 0.0) continue;
        double* drow = dw.row(i);
        for (std::size_t j = 0; j < layer.w.cols(); ++j) drow[j] += vi * vbar[j];
      }
      // propagate: vbar_{l+1} = W_l * (masked vbar)
      std::vector<double> next(layer.w.rows(), 0.0);
      for (std::size_t i = 0; i < layer.w.rows(); ++i) {
        const double* wrow = layer.w.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < layer.w.cols(); ++j) acc += wrow[j] * vbar[j];
        next[i] = acc;
      }
      vbar = std::move(next);
    }
  }
  grads.scale(1.0 / static_cast<double>(batch));
  return grads;
}

nn::MlpSpec default_generator_spec(std::size_t n, const std::vector<std::size_t>& hidden) {
  nn::MlpSpec spec;
  spec.widths.push_back(n);
  if (hidden.empty()) {
    spec.widths.push_back(n);
    spec.widths.push_back(std::max<std::size_t>(n / 2, 2));
  } else {
    for (auto w : hidden) spec.widths.push_back(w);
  }
  spec.widths.push_back(n);
  spec.hidden_act = nn::Act::leaky_relu;
  spec.output_act = nn::Act::tanh_bounded;  // per-coordinate output in [-1,1]
  spec.leaky_slope = 0.2;
  return spec;
}

nn::MlpSpec default_critic_spec(std::size_t n, GanVariant variant,
                                const std::vector<std::size_t>& hidden) {
  nn::MlpSpec spec;
  spec.widths.push_back(n);
  if (hidden.empty()) {
    spec.widths.push_back(n);
    spec.widths.push_back(std::max<std::size_t>(n / 2, 2));
  } else {
    for (auto w : hidden) spec.widths.push_back(w);
  }
  spec.widths.push_back(1);
  spec.hidden_act = nn::Act::leaky_relu;
  spec.output_act =
      variant == GanVariant::original_gan ? nn::Act::sigmoid : nn::Act::identity;
  spec.leaky_slope = 0.2;
  return spec;
}

namespace {

Matrix gather_rows(const Matrix& x, const std::vector<std::size_t>& idx, std::size_t begin,
                   std::size_t end) {
  Matrix out(end - begin, x.cols());
  for (std::size_t i = begin; i < end; ++i)
    for (std::size_t c = 0; c < x.cols(); ++c) out(i - begin, c) = x(idx[i], c);
  return out;
}

struct GeneratorBatchResult {
  Matrix delta;      // masked
  Matrix x_star;     // clipped
  Matrix clip_pass;  // 1 where x + delta stayed inside the ranges
};

GeneratorBatchResult enforce_pipeline(const Matrix& raw, const Matrix& x_batch,
                                      const ConstraintProfile& profile) {
  GeneratorBatchResult out;
  out.delta = raw;
  out.x_star = Matrix(raw.rows(), raw.cols());
  out.clip_pass = Matrix(raw.rows(), raw.cols());
  for (std::size_t r = 0; r < raw.rows(); ++r) {
    for (std::size_t c = 0; c < raw.cols(); ++c) {
      out.delta(r, c) = raw(r, c) * profile.mask[c];
      const double v = x_batch(r, c) + out.delta(r, c);
      const double lo = profile.ranges[c].lo, hi = profile.ranges[c].hi;
      out.x_star(r, c) = std::clamp(v, lo, hi);
      out.clip_pass(r, c) = (v >= lo && v <= hi) ? 1.0 : 0.0;
    }
  }
  return out;
}

double mean_scalar_output(const nn::Mlp& net, const Matrix& x) {
  const Matrix out = net.forward(x);
  double total = 0.0;
  for (std::size_t r = 0; r < out.rows(); ++r) total += out(r, 0);
  return out.rows() ? total / static_cast<double>(out.rows()) : 0.0;
}

}  // namespace

AttackArtifacts train_attack_gan(const AttackConfig& config, const FlowDataset& attack_flows,
                                 const nids::Classifier& classifier, int benign_index,
                                 const ConstraintProfile& profile) {
  config.validate();
  if (attack_flows.rows() == 0) throw std::invalid_argument("train_attack_gan: empty attack set");
  for (std::size_t i = 1; i < attack_flows.y.size(); ++i)
    if (attack_flows.y[i] != attack_flows.y[0])
      throw std::invalid_argument("train_attack_gan: attack set holds more than one class");
  const auto* dnn = dynamic_cast<const nids::MlpClassifier*>(&classifier);
  if (!dnn)
    throw std::invalid_argument(
        "train_attack_gan: gradient-based training needs a differentiable classifier");
  const std::size_t n = attack_flows.width();
  if (profile.width() != n) throw std::invalid_argument("train_attack_gan: profile width mismatch");

  Rng root(config.seed);
  Rng gen_init = root.fork(1);
  Rng critic_init = root.fork(2);
  Rng shuffle_rng = root.fork(3);
  Rng sigma_rng = root.fork(4);

  AttackArtifacts art;
  art.config = config;
  art.profile = profile;
  art.generator = nn::Mlp(default_generator_spec(n, config.generator_hidden), gen_init);
  art.critic = nn::Mlp(default_critic_spec(n, config.gan_variant, config.critic_hidden),
                       critic_init);

  nn::AdamOptimizer adam_g(config.optimizer.learning_rate, config.optimizer.beta1,
                           config.optimizer.beta2);
  nn::AdamOptimizer adam_d(config.optimizer.learning_rate, config.optimizer.beta1,
                           config.optimizer.beta2);
  auto gen_params = art.generator.flat_params();
  auto critic_params = art.critic.flat_params();

  const std::size_t n_rows = attack_flows.rows();
  const std::size_t batch_size = std::min(config.batch_size, n_rows);
  std::vector<std::size_t> order(n_rows);
  std::iota(order.begin(), order.end(), 0);

  const bool wgan = config.gan_variant == GanVariant::wgan_gp;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (std::size_t start = 0; start < n_rows; start += batch_size) {
      const std::size_t end = std::min(n_rows, start + batch_size);
      const Matrix xb = gather_rows(attack_flows.X, order, start, end);
      const std::size_t b = xb.rows();
      const double inv_b = 1.0 / static_cast<double>(b);

      for (std::size_t step = 0; step < config.critic_steps; ++step) {
        const Matrix raw = art.generator.forward(xb);
        const auto enf = enforce_pipeline(raw, xb, profile);

        nn::MlpGrads dgrads = art.critic.zero_grads();
        if (wgan) {
          // descend E[D(x*)] - E[D(x)] + gp
          nn::Mlp::Cache cache_fake, cache_real;
          art.critic.forward_train(enf.x_star, cache_fake);
          dgrads.add(art.critic.backward(cache_fake, Matrix(b, 1, inv_b)));
          art.critic.forward_train(xb, cache_real);
          dgrads.add(art.critic.backward(cache_real, Matrix(b, 1, -inv_b)));

          Matrix x_hat(b, n);
          for (std::size_t r = 0; r < b; ++r) {
            const double sigma = sigma_rng.uniform();
            for (std::size_t c = 0; c < n; ++c)
              x_hat(r, c) = sigma * xb(r, c) + (1.0 - sigma) * enf.x_star(r, c);
          }
          dgrads.add(gradient_penalty_param_grads(art.critic, x_hat, config.lambda_gp));
        } else {
          // log-loss discriminator: descend -E[log D(x)] - E[log(1 - D(x*))]
          nn::Mlp::Cache cache_real, cache_fake;
          const Matrix p_real = art.critic.forward_train(xb, cache_real);
          Matrix d_real(b, 1);
          for (std::size_t r = 0; r < b; ++r)
            d_real(r, 0) = -inv_b / std::max(p_real(r, 0), 1e-12);
          dgrads.add(art.critic.backward(cache_real, d_real));
          const Matrix p_fake = art.critic.forward_train(enf.x_star, cache_fake);
          Matrix d_fake(b, 1);
          for (std::size_t r = 0; r < b; ++r)
            d_fake(r, 0) = inv_b / std::max(1.0 - p_fake(r, 0), 1e-12);
          dgrads.add(art.critic.backward(cache_fake, d_fake));
        }
        adam_d.step(critic_params, art.critic.flat_grads(dgrads));
        art.critic.set_flat_params(critic_params);
      }

      // generator step
      nn::Mlp::Cache gen_cache;
      const Matrix raw = art.generator.forward_train(xb, gen_cache);
      const auto enf = enforce_pipeline(raw, xb, profile);

      // adversarial term
      Matrix d_logits;
      const Matrix logits = dnn->logits(enf.x_star);
      std::vector<int> targets(b, benign_index);
      const double adv = nn::softmax_cross_entropy(logits, targets, &d_logits);
      Matrix dx = dnn->input_gradient(enf.x_star, d_logits);

      // gan term
      if (wgan) {
        Matrix upstream(b, 1, -config.alpha * inv_b);
        const Matrix g = art.critic.input_gradient(enf.x_star, upstream);
        for (std::size_t i = 0; i < dx.data().size(); ++i) dx.data()[i] += g.data()[i];
      } else {
        // non-saturating generator log-loss -E[log D(x*)]
        const Matrix p_fake = art.critic.forward(enf.x_star);
        Matrix upstream(b, 1);
        for (std::size_t r = 0; r < b; ++r)
          upstream(r, 0) = -config.alpha * inv_b / std::max(p_fake(r, 0), 1e-12);
        const Matrix g = art.critic.input_gradient(enf.x_star, upstream);
        for (std::size_t i = 0; i < dx.data().size(); ++i) dx.data()[i] += g.data()[i];
      }

      // perturbation hinge on the masked delta
      Matrix d_raw(b, n);
      for (std::size_t r = 0; r < b; ++r) {
        double norm2 = 0.0;
        for (std::size_t c = 0; c < n; ++c) norm2 += enf.delta(r, c) * enf.delta(r, c);
        const double norm = std::sqrt(norm2);
        const double hinge_coeff =
            norm > config.epsilon ? config.beta * inv_b / norm : 0.0;
        for (std::size_t c = 0; c < n; ++c) {
          double grad = dx(r, c) * enf.clip_pass(r, c);
          grad += hinge_coeff * enf.delta(r, c);
          d_raw(r, c) = grad * profile.mask[c];
        }
      }
      if (!std::isfinite(adv))
        throw std::runtime_error("train_attack_gan: non-finite adversarial loss");
      nn::MlpGrads ggrads = art.generator.backward(gen_cache, d_raw);
      adam_g.step(gen_params, art.generator.flat_grads(ggrads));
      art.generator.set_flat_params(gen_params);
    }

    // end-of-epoch trace on the full attack set
    const Matrix raw_all = art.generator.forward(attack_flows.X);
    const auto enf_all = enforce_pipeline(raw_all, attack_flows.X, profile);
    TraceEntry entry;
    entry.epoch = epoch;
    entry.adversarial_loss = adversarial_loss(classifier, enf_all.x_star, benign_index);
    entry.perturbation_loss = perturbation_loss(enf_all.delta, config.epsilon);
    if (wgan) {
      Matrix x_hat = enf_all.x_star;  // sigma = 0 endpoint; trace only
      entry.critic_loss = critic_loss(art.critic, attack_flows.X, enf_all.x_star, x_hat,
                                      config.lambda_gp, config.gan_variant);
      entry.gan_term = -mean_scalar_output(art.critic, enf_all.x_star);
    } else {
      entry.critic_loss = critic_loss(art.critic, attack_flows.X, enf_all.x_star,
                                      enf_all.x_star, config.lambda_gp, config.gan_variant);
      const Matrix p_fake = art.critic.forward(enf_all.x_star);
      double t = 0.0;
      for (std::size_t r = 0; r < p_fake.rows(); ++r)
        t -= std::log(std::max(p_fake(r, 0), 1e-300));
      entry.gan_term = t / static_cast<double>(p_fake.rows());
    }
    const auto labels = classifier.predict_labels(enf_all.x_star);
    std::size_t evaded = 0;
    double norm_total = 0.0;
    for (std::size_t r = 0; r < labels.size(); ++r) {
      if (labels[r] == benign_index) ++evaded;
      double norm2 = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        const double d = enf_all.x_star(r, c) - attack_flows.X(r, c);
        norm2 += d * d;
      }
      norm_total += std::sqrt(norm2);
    }
    entry.evasion_rate = static_cast<double>(evaded) / static_cast<double>(n_rows);
    entry.mean_delta_norm = norm_total / static_cast<double>(n_rows);
    if (!std::isfinite(entry.adversarial_loss) || !std::isfinite(entry.critic_loss)) {
      std::ostringstream os;
      os << "train_attack_gan: non-finite loss at epoch " << epoch << " (adv "
         << entry.adversarial_loss << ", critic " << entry.critic_loss << ")";
      throw std::runtime_error(os.str());
    }
    art.trace.push_back(entry);
    if (entry.evasion_rate >= config.evasion_stop) break;
  }
  return art;
}

namespace {

json config_to_json(const AttackConfig& c) {
  return json{{"alpha", c.alpha},
              {"beta", c.beta},
              {"epsilon", c.epsilon},
              {"lambda_gp", c.lambda_gp},
              {"optimizer",
               {{"learning_rate", c.optimizer.learning_rate},
                {"beta1", c.optimizer.beta1},
                {"beta2", c.optimizer.beta2}}},
              {"epochs", c.epochs},
              {"batch_size", c.batch_size},
              {"critic_steps", c.critic_steps},
              {"gan_variant", variant_name(c.gan_variant)},
              {"target_class", c.target_class},
              {"evasion_stop", c.evasion_stop},
              {"seed", c.seed},
              {"generator_hidden", c.generator_hidden},
              {"critic_hidden", c.critic_hidden}};
}

AttackConfig config_from_json(const json& j) {
  AttackConfig c;
  c.alpha = j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.epsilon = j.at("epsilon").get<double>();
  c.lambda_gp = j.at("lambda_gp").get<double>();
  c.optimizer.learning_rate = j.at("optimizer").at("learning_rate").get<double>();
  c.optimizer.beta1 = j.at("optimizer").at("beta1").get<double>();
  c.optimizer.beta2 = j.at("optimizer").at("beta2").get<double>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.critic_steps = j.at("critic_steps").get<std::size_t>();
  c.gan_variant = variant_from_name(j.at("gan_variant").get<std::string>());
  c.target_class = j.at("target_class").get<std::string>();
  c.evasion_stop = j.at("evasion_stop").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.generator_hidden = j.at("generator_hidden").get<std::vector<std::size_t>>();
  c.critic_hidden = j.at("critic_hidden").get<std::vector<std::size_t>>();
  return c;
}

json trace_to_json(const std::vector<TraceEntry>& trace) {
  json arr = json::array();
  for (const auto& t : trace) {
    arr.push_back({{"epoch", t.epoch},
                   {"adversarial_loss", t.adversarial_loss},
                   {"gan_term", t.gan_term},
                   {"perturbation_loss", t.perturbation_loss},
                   {"critic_loss", t.critic_loss},
                   {"evasion_rate", t.evasion_rate},
                   {"mean_delta_norm", t.mean_delta_norm}});
  }
  return arr;
}

constexpr const char* kArtifactMagic = "FLOWEVADE-ATTACK v1";

}  // namespace

void save_artifacts(const AttackArtifacts& artifacts, const std::string& path) {
  json j;
  j["magic"] = kArtifactMagic;
  j["config"] = config_to_json(artifacts.config);
  j["profile"] = json::parse(constraints::profile_to_text(artifacts.profile));
  j["generator"] = nn::mlp_to_json(artifacts.generator);
  j["critic"] = nn::mlp_to_json(artifacts.critic);
  j["trace"] = trace_to_json(artifacts.trace);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write attack artifacts: " + path);
  out << j.dump() << "\n";
}

AttackArtifacts load_artifacts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open attack artifacts: " + path);
  json j;
  in >> j;
  if (j.value("magic", "") != kArtifactMagic)
    throw std::runtime_error(path + ": not an attack artifact file");
  AttackArtifacts art;
  art.config = config_from_json(j.at("config"));
  art.profile = constraints::profile_from_text(j.at("profile").dump());
  art.generator = nn::mlp_from_json(j.at("generator"));
  art.critic = nn::mlp_from_json(j.at("critic"));
  for (const auto& t : j.at("trace")) {
    TraceEntry e;
    e.epoch = t.at("epoch").get<std::size_t>();
    e.adversarial_loss = t.at("adversarial_loss").get<double>();
    e.gan_term = t.at("gan_term").get<double>();
    e.perturbation_loss = t.at("perturbation_loss").get<double>();
    e.critic_loss = t.at("critic_loss").get<double>();
    e.evasion_rate = t.at("evasion_rate").get<double>();
    e.mean_delta_norm = t.at("mean_delta_norm").get<double>();
    art.trace.push_back(e);
  }
  return art;
}

void append_trace_log(const AttackArtifacts& artifacts, const std::string& path,
                      const std::string& run_id) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot append trace log: " + path);
  for (const auto& t : artifacts.trace) {
    json line{{"run", run_id},
              {"epoch", t.epoch},
              {"adversarial_loss", t.adversarial_loss},
              {"gan_term", t.gan_term},
              {"perturbation_loss", t.perturbation_loss},
              {"critic_loss", t.critic_loss},
              {"evasion_rate", t.evasion_rate},
              {"mean_delta_norm", t.mean_delta_norm}};
    out << line.dump() << "\n";
  }
}

}  // namespace flowevade::attack
