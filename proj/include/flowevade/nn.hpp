#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "flowevade/kernels.hpp"
#include "flowevade/matrix.hpp"
#include "flowevade/rng.hpp"

namespace flowevade::nn {

enum class Act { identity, relu, leaky_relu, tanh_bounded, sigmoid };

struct DenseLayer {
  Matrix w;               // [out x in]
  std::vector<double> b;  // [out]
};

struct BatchNormState {
  std::vector<double> gamma, beta, running_mean, running_var;
  double momentum = 0.9;
  double eps = 1e-5;
};

struct MlpSpec {
  std::vector<std::size_t> widths;  // input, hidden..., output
  Act hidden_act = Act::relu;
  Act output_act = Act::identity;
  double leaky_slope = 0.2;
  bool batch_norm = false;  // hidden layers: dense -> act -> norm -> dropout
  double dropout = 0.0;

  std::size_t n_dense() const { return widths.size() - 1; }
};

struct MlpGrads {
  std::vector<Matrix> dw;
  std::vector<std::vector<double>> db;
  std::vector<std::vector<double>> dgamma, dbeta;

  void scale(double s);
  void add(const MlpGrads& other);
};

/// Plain feed-forward network, full-batch forward/backward on Matrix
/// batches (one row per sample). Training-mode forward keeps a cache for
/// the backward pass; inference mode is stateless and thread-safe.
class Mlp {
 public:
  Mlp() = default;
  Mlp(MlpSpec spec, Rng& init_rng);

  const MlpSpec& spec() const { return spec_; }
  std::size_t input_width() const { return spec_.widths.front(); }
  std::size_t output_width() const { return spec_.widths.back(); }
  std::size_t n_dense() const { return layers_.size(); }
  DenseLayer& layer(std::size_t i) { return layers_[i]; }
  const DenseLayer& layer(std::size_t i) const { return layers_[i]; }
  const BatchNormState& norm(std::size_t i) const { return norms_[i]; }
  BatchNormState& norm_mutable(std::size_t i) { return norms_[i]; }

  Matrix forward(const Matrix& x) const;

  struct Cache {
    Matrix input;
    std::vector<Matrix> z;         // pre-activations per dense layer
    std::vector<Matrix> h;         // post-activation
    std::vector<Matrix> bn_xhat;   // batch-norm normalized values (hidden layers)
    std::vector<std::vector<double>> bn_mu, bn_var;
    std::vector<Matrix> dropout_mask;  // scaled keep masks
    std::vector<Matrix> a;         // layer outputs fed forward
  };

  /// Training-mode forward: batch statistics for the norm layers (running
  /// stats updated), dropout drawn from `dropout_rng`.
  Matrix forward_train(const Matrix& x, Cache& cache, Rng* dropout_rng = nullptr);

  /// d_out is dL/d(output of the net); returns parameter gradients and
  /// optionally dL/d(input).
  MlpGrads backward(const Cache& cache, const Matrix& d_out, Matrix* d_input = nullptr) const;

  /// Inference-mode dL/d(input) for a given upstream gradient.
  Matrix input_gradient(const Matrix& x, const Matrix& d_out) const;

  MlpGrads zero_grads() const;
  std::size_t param_count() const;
  std::vector<double> flat_params() const;
  void set_flat_params(const std::vector<double>& flat);
  std::vector<double> flat_grads(const MlpGrads& grads) const;

 private:
  MlpSpec spec_;
  std::vector<DenseLayer> layers_;
  std::vector<BatchNormState> norms_;  // one per hidden layer when enabled

  bool hidden_has_norm(std::size_t dense_index) const {
    return spec_.batch_norm && dense_index + 1 < layers_.size();
  }
  bool hidden_has_dropout(std::size_t dense_index) const {
    return spec_.dropout > 0.0 && dense_index + 1 < layers_.size();
  }
};

double activate(Act act, double v, double leaky_slope);
/// Derivative with respect to the pre-activation, expressed from pre and
/// post values (post is enough for tanh/sigmoid).
double activate_deriv(Act act, double pre, double post, double leaky_slope);

/// Row-wise stable softmax.
Matrix softmax_rows(const Matrix& logits);

/// Mean cross-entropy against integer targets plus dL/dlogits (softmax-CE
/// fused gradient, already divided by the batch size).
double softmax_cross_entropy(const Matrix& logits, const std::vector<int>& targets,
                             Matrix* d_logits = nullptr);

class AdamOptimizer {
 public:
  AdamOptimizer(double lr, double beta1, double beta2, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(std::vector<double>& params, const std::vector<double>& grads);
  void reset();
  double learning_rate() const { return lr_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  std::vector<double> m_, v_;
  long long t_ = 0;
};

}  // namespace flowevade::nn
