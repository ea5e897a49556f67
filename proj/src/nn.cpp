#include "flowevade/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flowevade::nn {

double activate(Act act, double v, double leaky_slope) {
  switch (act) {
    case Act::identity: return v;
    case Act::relu: return v > 0.0 ? v : 0.0;
    case Act::leaky_relu: return v > 0.0 ? v : leaky_slope * v;
    case Act::tanh_bounded: return std::tanh(v);
    case Act::sigmoid: return 1.0 / (1.0 + std::exp(-v));
  }
  return v;
}

double activate_deriv(Act act, double pre, double post, double leaky_slope) {
  switch (act) {
    case Act::identity: return 1.0;
    case Act::relu: return pre > 0.0 ? 1.0 : 0.0;
    case Act::leaky_relu: return pre > 0.0 ? 1.0 : leaky_slope;
    case Act::tanh_bounded: return 1.0 - post * post;
    case Act::sigmoid: return post * (1.0 - post);
  }
  return 1.0;
}

void MlpGrads::scale(double s) {
  for (auto& m : dw)
    for (auto& v : m.data()) v *= s;
  for (auto& vec : db)
    for (auto& v : vec) v *= s;
  for (auto& vec : dgamma)
    for (auto& v : vec) v *= s;
  for (auto& vec : dbeta)
    for (auto& v : vec) v *= s;
}

void MlpGrads::add(const MlpGrads& other) {
  for (std::size_t l = 0; l < dw.size(); ++l) {
    for (std::size_t i = 0; i < dw[l].data().size(); ++i) dw[l].data()[i] += other.dw[l].data()[i];
    for (std::size_t i = 0; i < db[l].size(); ++i) db[l][i] += other.db[l][i];
  }
  for (std::size_t l = 0; l < dgamma.size(); ++l) {
    for (std::size_t i = 0; i < dgamma[l].size(); ++i) dgamma[l][i] += other.dgamma[l][i];
    for (std::size_t i = 0; i < dbeta[l].size(); ++i) dbeta[l][i] += other.dbeta[l][i];
  }
}

Mlp::Mlp(MlpSpec spec, Rng& init_rng) : spec_(std::move(spec)) {
  if (spec_.widths.size() < 2) throw std::invalid_argument("Mlp: need at least two widths");
  const std::size_t n = spec_.n_dense();
  layers_.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    const std::size_t in = spec_.widths[l];
    const std::size_t out = spec_.widths[l + 1];
    layers_[l].w = Matrix(out, in);
    layers_[l].b.assign(out, 0.0);
    // He-style scaling on hidden layers, smaller final layer
    const double scale = (l + 1 < n) ? std::sqrt(2.0 / static_cast<double>(in))
                                     : std::sqrt(1.0 / static_cast<double>(in));
    for (auto& v : layers_[l].w.data()) v = scale * init_rng.normal();
  }
  if (spec_.batch_norm) {
    norms_.resize(n > 0 ? n - 1 : 0);
    for (std::size_t l = 0; l + 1 < n; ++l) {
      const std::size_t width = spec_.widths[l + 1];
      norms_[l].gamma.assign(width, 1.0);
      norms_[l].beta.assign(width, 0.0);
      norms_[l].running_mean.assign(width, 0.0);
      norms_[l].running_var.assign(width, 1.0);
    }
  }
}

Matrix Mlp::forward(const Matrix& x) const {
  if (x.cols() != input_width()) throw std::invalid_argument("Mlp::forward: width mismatch");
  Matrix a = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Matrix z = kernels::matmul_bt(a, layers_[l].w);
    kernels::add_row_vector(z, layers_[l].b);
    const bool last = l + 1 == layers_.size();
    const Act act = last ? spec_.output_act : spec_.hidden_act;
    for (auto& v : z.data()) v = activate(act, v, spec_.leaky_slope);
    if (!last && spec_.batch_norm) {
      const auto& bn = norms_[l];
      for (std::size_t r = 0; r < z.rows(); ++r)
        for (std::size_t c = 0; c < z.cols(); ++c)
          z(r, c) = bn.gamma[c] * (z(r, c) - bn.running_mean[c]) /
                        std::sqrt(bn.running_var[c] + bn.eps) +
                    bn.beta[c];
    }
    a = std::move(z);  // dropout is inference no-op
  }
  return a;
}

Matrix Mlp::forward_train(const Matrix& x, Cache& cache, Rng* dropout_rng) {
  if (x.cols() != input_width()) throw std::invalid_argument("Mlp::forward_train: width mismatch");
  const std::size_t n = layers_.size();
  cache = Cache{};
  cache.input = x;
  cache.z.resize(n);
  cache.h.resize(n);
  cache.bn_xhat.resize(n);
  cache.bn_mu.resize(n);
  cache.bn_var.resize(n);
  cache.dropout_mask.resize(n);
  cache.a.resize(n);

  const Matrix* a_prev = &cache.input;
  for (std::size_t l = 0; l < n; ++l) {
    Matrix z = kernels::matmul_bt(*a_prev, layers_[l].w);
    kernels::add_row_vector(z, layers_[l].b);
    cache.z[l] = z;
    const bool last = l + 1 == n;
    const Act act = last ? spec_.output_act : spec_.hidden_act;
    Matrix h = std::move(z);
    for (auto& v : h.data()) v = activate(act, v, spec_.leaky_slope);
    cache.h[l] = h;

    Matrix out = std::move(h);
    if (!last && spec_.batch_norm) {
      auto& bn = norms_[l];
      const std::size_t rows = out.rows(), cols = out.cols();
      std::vector<double> mu(cols, 0.0), var(cols, 0.0);
      for (std::size_t c = 0; c < cols; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < rows; ++r) s += out(r, c);
        mu[c] = s / static_cast<double>(rows);
        double sq = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
          const double d = out(r, c) - mu[c];
          sq += d * d;
        }
        var[c] = sq / static_cast<double>(rows);
      }
      Matrix xhat(rows, cols);
      for (std::size_t c = 0; c < cols; ++c) {
        const double denom = std::sqrt(var[c] + bn.eps);
        for (std::size_t r = 0; r < rows; ++r) {
          xhat(r, c) = (out(r, c) - mu[c]) / denom;
          out(r, c) = bn.gamma[c] * xhat(r, c) + bn.beta[c];
        }
        bn.running_mean[c] = bn.momentum * bn.running_mean[c] + (1.0 - bn.momentum) * mu[c];
        bn.running_var[c] = bn.momentum * bn.running_var[c] + (1.0 - bn.momentum) * var[c];
      }
      cache.bn_xhat[l] = std::move(xhat);
      cache.bn_mu[l] = std::move(mu);
      cache.bn_var[l] = std::move(var);
    }
    if (!last && spec_.dropout > 0.0 && dropout_rng) {
      const double keep = 1.0 - spec_.dropout;
      Matrix mask(out.rows(), out.cols());
      for (std::size_t i = 0; i < mask.data().size(); ++i)
        mask.data()[i] = dropout_rng->uniform() < keep ? 1.0 / keep : 0.0;
      for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] *= mask.data()[i];
      cache.dropout_mask[l] = std::move(mask);
    }
    cache.a[l] = std::move(out);
    a_prev = &cache.a[l];
  }
  return cache.a.back();
}

MlpGrads Mlp::zero_grads() const {
  MlpGrads g;
  g.dw.resize(layers_.size());
  g.db.resize(layers_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    g.dw[l] = Matrix(layers_[l].w.rows(), layers_[l].w.cols());
    g.db[l].assign(layers_[l].b.size(), 0.0);
  }
  g.dgamma.resize(norms_.size());
  g.dbeta.resize(norms_.size());
  for (std::size_t l = 0; l < norms_.size(); ++l) {
    g.dgamma[l].assign(norms_[l].gamma.size(), 0.0);
    g.dbeta[l].assign(norms_[l].beta.size(), 0.0);
  }
  return g;
}

MlpGrads Mlp::backward(const Cache& cache, const Matrix& d_out, Matrix* d_input) const {
  const std::size_t n = layers_.size();
  MlpGrads grads = zero_grads();
  Matrix da = d_out;  // gradient wrt current layer's post-pipeline output
  for (std::size_t li = n; li-- > 0;) {
    const bool last = li + 1 == n;
    Matrix dh;  // gradient wrt the activation output h
    if (last) {
      dh = std::move(da);
    } else {
      dh = std::move(da);
      if (spec_.dropout > 0.0 && !cache.dropout_mask[li].empty()) {
        for (std::size_t i = 0; i < dh.data().size(); ++i)
          dh.data()[i] *= cache.dropout_mask[li].data()[i];
      }
      if (spec_.batch_norm) {
        const auto& bn = norms_[li];
        const auto& xhat = cache.bn_xhat[li];
        const auto& var = cache.bn_var[li];
        const std::size_t rows = dh.rows(), cols = dh.cols();
        Matrix dx(rows, cols);
        for (std::size_t c = 0; c < cols; ++c) {
          double sum_dy = 0.0, sum_dy_xhat = 0.0;
          for (std::size_t r = 0; r < rows; ++r) {
            sum_dy += dh(r, c);
            sum_dy_xhat += dh(r, c) * xhat(r, c);
          }
          grads.dbeta[li][c] += sum_dy;
          grads.dgamma[li][c] += sum_dy_xhat;
          const double inv_std = 1.0 / std::sqrt(var[c] + bn.eps);
          const double invN = 1.0 / static_cast<double>(rows);
          for (std::size_t r = 0; r < rows; ++r) {
            dx(r, c) = bn.gamma[c] * inv_std *
                       (dh(r, c) - invN * sum_dy - xhat(r, c) * invN * sum_dy_xhat);
          }
        }
        dh = std::move(dx);
      }
    }
    // through the activation
    const Act act = last ? spec_.output_act : spec_.hidden_act;
    Matrix dz = std::move(dh);
    if (act != Act::identity) {
      for (std::size_t i = 0; i < dz.data().size(); ++i)
        dz.data()[i] *=
            activate_deriv(act, cache.z[li].data()[i], cache.h[li].data()[i], spec_.leaky_slope);
    }
    const Matrix& a_prev = li == 0 ? cache.input : cache.a[li - 1];
    grads.dw[li] = kernels::matmul_at(dz, a_prev);
    grads.db[li] = kernels::column_sums(dz);
    if (li > 0 || d_input) {
      Matrix dprev = kernels::matmul(dz, layers_[li].w);
      if (li == 0 && d_input) {
        *d_input = std::move(dprev);
      } else {
        da = std::move(dprev);
      }
    }
  }
  return grads;
}

Matrix Mlp::input_gradient(const Matrix& x, const Matrix& d_out) const {
  if (x.cols() != input_width()) throw std::invalid_argument("input_gradient: width mismatch");
  const std::size_t n = layers_.size();
  std::vector<Matrix> z(n), h(n), a(n);
  const Matrix* a_prev = &x;
  for (std::size_t l = 0; l < n; ++l) {
    Matrix zl = kernels::matmul_bt(*a_prev, layers_[l].w);
    kernels::add_row_vector(zl, layers_[l].b);
    z[l] = zl;
    const bool last = l + 1 == n;
    const Act act = last ? spec_.output_act : spec_.hidden_act;
    Matrix hl = std::move(zl);
    for (auto& v : hl.data()) v = activate(act, v, spec_.leaky_slope);
    h[l] = hl;
    Matrix out = std::move(hl);
    if (!last && spec_.batch_norm) {
      const auto& bn = norms_[l];
      for (std::size_t r = 0; r < out.rows(); ++r)
        for (std::size_t c = 0; c < out.cols(); ++c)
          out(r, c) = bn.gamma[c] * (out(r, c) - bn.running_mean[c]) /
                          std::sqrt(bn.running_var[c] + bn.eps) +
                      bn.beta[c];
    }
    a[l] = std::move(out);
    a_prev = &a[l];
  }

  Matrix da = d_out;
  for (std::size_t li = n; li-- > 0;) {
    const bool last = li + 1 == n;
    if (!last && spec_.batch_norm) {
      const auto& bn = norms_[li];
      for (std::size_t r = 0; r < da.rows(); ++r)
        for (std::size_t c = 0; c < da.cols(); ++c)
          da(r, c) *= bn.gamma[c] / std::sqrt(bn.running_var[c] + bn.eps);
    }
    const Act act = last ? spec_.output_act : spec_.hidden_act;
    if (act != Act::identity) {
      for (std::size_t i = 0; i < da.data().size(); ++i)
        da.data()[i] *= activate_deriv(act, z[li].data()[i], h[li].data()[i], spec_.leaky_slope);
    }
    da = kernels::matmul(da, layers_[li].w);
  }
  return da;
}

std::size_t Mlp::param_count() const {
  std::size_t total = 0;
  for (const auto& l : layers_) total += l.w.size() + l.b.size();
  for (const auto& bn : norms_) total += bn.gamma.size() + bn.beta.size();
  return total;
}

std::vector<double> Mlp::flat_params() const {
  std::vector<double> flat;
  flat.reserve(param_count());
  for (const auto& l : layers_) {
    flat.insert(flat.end(), l.w.data().begin(), l.w.data().end());
    flat.insert(flat.end(), l.b.begin(), l.b.end());
  }
  for (const auto& bn : norms_) {
    flat.insert(flat.end(), bn.gamma.begin(), bn.gamma.end());
    flat.insert(flat.end(), bn.beta.begin(), bn.beta.end());
  }
  return flat;
}

void Mlp::set_flat_params(const std::vector<double>& flat) {
  if (flat.size() != param_count()) throw std::invalid_argument("set_flat_params: size mismatch");
  std::size_t pos = 0;
  for (auto& l : layers_) {
    std::copy(flat.begin() + pos, flat.begin() + pos + l.w.size(), l.w.data().begin());
    pos += l.w.size();
    std::copy(flat.begin() + pos, flat.begin() + pos + l.b.size(), l.b.begin());
    pos += l.b.size();
  }
  for (auto& bn : norms_) {
    std::copy(flat.begin() + pos, flat.begin() + pos + bn.gamma.size(), bn.gamma.begin());
    pos += bn.gamma.size();
    std::copy(flat.begin() + pos, flat.begin() + pos + bn.beta.size(), bn.beta.begin());
    pos += bn.beta.size();
  }
}

std::vector<double> Mlp::flat_grads(const MlpGrads& grads) const {
  std::vector<double> flat;
  flat.reserve(param_count());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    flat.insert(flat.end(), grads.dw[l].data().begin(), grads.dw[l].data().end());
    flat.insert(flat.end(), grads.db[l].begin(), grads.db[l].end());
  }
  for (std::size_t l = 0; l < norms_.size(); ++l) {
    flat.insert(flat.end(), grads.dgamma[l].begin(), grads.dgamma[l].end());
    flat.insert(flat.end(), grads.dbeta[l].begin(), grads.dbeta[l].end());
  }
  return flat;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix probs(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    double max_v = logits(r, 0);
    for (std::size_t c = 1; c < logits.cols(); ++c) max_v = std::max(max_v, logits(r, c));
    double sum = 0.0;
    for (std::size_t c = 0; c < logits.cols(); ++c) {
      probs(r, c) = std::exp(logits(r, c) - max_v);
      sum += probs(r, c);
    }
    for (std::size_t c = 0; c < logits.cols(); ++c) probs(r, c) /= sum;
  }
  return probs;
}

double softmax_cross_entropy(const Matrix& logits, const std::vector<int>& targets,
                             Matrix* d_logits) {
  if (targets.size() != logits.rows())
    throw std::invalid_argument("softmax_cross_entropy: target count mismatch");
  const Matrix probs = softmax_rows(logits);
  const double invN = 1.0 / static_cast<double>(logits.rows());
  double loss = 0.0;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const double p = std::max(probs(r, static_cast<std::size_t>(targets[r])), 1e-300);
    loss -= std::log(p);
  }
  loss *= invN;
  if (d_logits) {
    *d_logits = probs;
    for (std::size_t r = 0; r < logits.rows(); ++r) {
      (*d_logits)(r, static_cast<std::size_t>(targets[r])) -= 1.0;
      for (std::size_t c = 0; c < logits.cols(); ++c) (*d_logits)(r, c) *= invN;
    }
  }
  return loss;
}

void AdamOptimizer::step(std::vector<double>& params, const std::vector<double>& grads) {
  if (params.size() != grads.size()) throw std::invalid_argument("Adam: size mismatch");
  if (m_.size() != params.size()) {
    m_.assign(params.size(), 0.0);
    v_.assign(params.size(), 0.0);
    t_ = 0;
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grads[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grads[i] * grads[i];
    const double mhat = m_[i] / bc1;
    const double vhat = v_[i] / bc2;
    params[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
  }
}

void AdamOptimizer::reset() {
  m_.clear();
  v_.clear();
  t_ = 0;
}

}  // namespace flowevade::nn
