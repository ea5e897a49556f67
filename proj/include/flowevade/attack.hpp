#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowevade/constraints.hpp"
#include "flowevade/dataset.hpp"
#include "flowevade/nids.hpp"
#include "flowevade/nn.hpp"

namespace flowevade::attack {

using constraints::ConstraintProfile;
using flows::FlowDataset;

enum class GanVariant { wgan_gp, original_gan };

GanVariant variant_from_name(const std::string& name);
std::string variant_name(GanVariant variant);

struct OptimizerConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.5;
  double beta2 = 0.9;
};

struct AttackConfig {
  double alpha = 0.1;       // GAN-term weight
  double beta = 0.2;        // perturbation-term weight
  double epsilon = 0.3;     // l2 hinge budget
  double lambda_gp = 10.0;  // gradient-penalty coefficient
  OptimizerConfig optimizer;
  std::size_t epochs = 800;
  std::size_t batch_size = 64;
  std::size_t critic_steps = 1;  // critic updates per generator update
  GanVariant gan_variant = GanVariant::wgan_gp;
  std::string target_class;     // benign label; empty = dataset's designated one
  double evasion_stop = 1.0;    // stop once the epoch evasion rate reaches this
  std::uint64_t seed = 1;
  std::vector<std::size_t> generator_hidden;  // empty -> {n, n/2}
  std::vector<std::size_t> critic_hidden;     // empty -> {n, n/2}

  void validate() const;
};

struct TraceEntry {
  std::size_t epoch = 0;
  double adversarial_loss = 0.0;
  double gan_term = 0.0;
  double perturbation_loss = 0.0;
  double critic_loss = 0.0;
  double evasion_rate = 0.0;
  double mean_delta_norm = 0.0;
};

struct AttackArtifacts {
  nn::Mlp generator;
  nn::Mlp critic;
  AttackConfig config;
  ConstraintProfile profile;
  std::vector<TraceEntry> trace;
};

/// mean over the batch of max(0, ||dx||_2 - epsilon)
double perturbation_loss(const Matrix& delta_batch, double epsilon);

/// mean cross-entropy of the classifier's prediction against the target
/// (benign) class; 0 in the limit of full benign confidence.
double adversarial_loss(const nids::Classifier& classifier, const Matrix& x_star_batch,
                        int target_class);

/// mean over the batch of lambda * (||grad_xhat D(xhat)||_2 - 1)^2
double gradient_penalty(const nn::Mlp& critic, const Matrix& x_hat_batch, double lambda_gp);

/// WGAN-GP critic objective value, mean D(x) - mean D(x*) + gradient
/// penalty. The original-gan variant reports the log-loss discriminator
/// objective with no penalty.
double critic_loss(const nn::Mlp& critic, const Matrix& x_batch, const Matrix& x_star_batch,
                   const Matrix& x_hat_batch, double lambda_gp,
                   GanVariant variant = GanVariant::wgan_gp);

/// Masked generator output: mask ∘ G(x).
Matrix generate_delta(const nn::Mlp& generator, const Matrix& x_batch,
                      const ConstraintProfile& profile);

/// Full enforcement pipeline: x* = clip(x + mask ∘ G(x)).
Matrix generate_adversarial(const nn::Mlp& generator, const Matrix& x_batch,
                            const ConstraintProfile& profile);

/// Parameter gradient of `gradient_penalty` for a piecewise-linear critic
/// (exact almost everywhere; the activation-derivative masks are locally
/// constant). Exposed for the finite-difference tests.
nn::MlpGrads gradient_penalty_param_grads(const nn::Mlp& critic, const Matrix& x_hat_batch,
                                          double lambda_gp);

nn::MlpSpec default_generator_spec(std::size_t n, const std::vector<std::size_t>& hidden = {});
nn::MlpSpec default_critic_spec(std::size_t n, GanVariant variant,
                                const std::vector<std::size_t>& hidden = {});

/// Alternating critic/generator training with both enforcement steps inside
/// the loop. `attack_flows` must hold a single attacked class; the
/// classifier is fixed and must be differentiable (the true target in
/// whitebox runs, the surrogate elsewhere).
AttackArtifacts train_attack_gan(const AttackConfig& config, const FlowDataset& attack_flows,
                                 const nids::Classifier& classifier, int benign_index,
                                 const ConstraintProfile& profile);

void save_artifacts(const AttackArtifacts& artifacts, const std::string& path);
AttackArtifacts load_artifacts(const std::string& path);

/// Appends one JSON line per trace entry for plotting.
void append_trace_log(const AttackArtifacts& artifacts, const std::string& path,
                      const std::string& run_id);

}  // namespace flowevade::attack
