// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/nn/layers.hpp"

#include <fmt/format.h>

#include <cmath>

#include "scope/util/error.hpp"

namespace scope::nn {

Tensor ParamStore::create(const std::string& name, Matrix init) {
  if (params_.contains(name) || buffers_.contains(name)) {
    throw InvalidArgument(fmt::format("duplicate parameter '{}'", name));
  }
  auto t = Tensor::parameter(std::move(init));
  params_.emplace(name, t);
  return t;
}

std::shared_ptr<Matrix> ParamStore::create_buffer(const std::string& name, Matrix init) {
  if (params_.contains(name) || buffers_.contains(name)) {
    throw InvalidArgument(fmt::format("duplicate buffer '{}'", name));
  }
  auto b = std::make_shared<Matrix>(std::move(init));
  buffers_.emplace(name, b);
  return b;
}

Tensor ParamStore::param(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw InvalidArgument(fmt::format("no parameter '{}'", name));
  return it->second;
}

std::size_t ParamStore::num_scalars() const {
  std::size_t n = 0;
  for (const auto& [name, t] : params_) n += static_cast<std::size_t>(t.value().size());
  return n;
}

void ParamStore::zero_grad() {
  for (auto& [name, t] : params_) {
    Tensor h = t;
    h.zero_grad();
  }
}

void ParamStore::copy_values_from(const ParamStore& other) {
  for (auto& [name, t] : params_) {
    const auto& src = other.param(name).value();
    Tensor h = t;
    if (src.rows() != h.rows() || src.cols() != h.cols()) {
      throw InvalidArgument(fmt::format("parameter '{}' shape mismatch", name));
    }
    h.mutable_value() = src;
  }
  for (auto& [name, b] : buffers_) {
    auto it = other.buffers().find(name);
    if (it == other.buffers().end()) throw InvalidArgument(fmt::format("no buffer '{}'", name));
    *b = *it->second;
  }
}

Matrix uniform_fan_in(Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  Matrix w(fan_in, fan_out);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-bound, bound);
  return w;
}

Linear::Linear(ParamStore& store, const std::string& name, Eigen::Index in, Eigen::Index out, Rng& rng,
               bool bias) {
  weight_ = store.create(name + ".weight", uniform_fan_in(in, out, rng));
  if (bias) bias_ = store.create(name + ".bias", Matrix::Zero(1, out));
}

Tensor Linear::operator()(const Tensor& x) const {
  Tensor y = matmul(x, weight_);
  return bias_.defined() ? add_row(y, bias_) : y;
}

BatchNorm::BatchNorm(ParamStore& store, const std::string& name, Eigen::Index dim, double momentum, double eps)
    : momentum_(momentum), eps_(eps) {
  gamma_ = store.create(name + ".gamma", Matrix::Ones(1, dim));
  beta_ = store.create(name + ".beta", Matrix::Zero(1, dim));
  running_mean_ = store.create_buffer(name + ".running_mean", Matrix::Zero(1, dim));
  running_var_ = store.create_buffer(name + ".running_var", Matrix::Ones(1, dim));
}

Tensor BatchNorm::operator()(const Tensor& x, const Context& ctx) const {
  if (!ctx.training) {
    return batch_norm_eval(x, gamma_, beta_, running_mean_->row(0), running_var_->row(0), eps_);
  }
  BatchStats stats;
  Tensor y = batch_norm_train(x, gamma_, beta_, eps_, &stats);
  const double n = static_cast<double>(x.rows());
  RowVector unbiased = n > 1 ? RowVector(stats.var * (n / (n - 1.0))) : stats.var;
  running_mean_->row(0) = (1.0 - momentum_) * running_mean_->row(0) + momentum_ * stats.mean;
  running_var_->row(0) = (1.0 - momentum_) * running_var_->row(0) + momentum_ * unbiased;
  return y;
}

Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, Rng& rng) {
  Matrix m(rows, cols);
  const double keep = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform() < rate ? 0.0 : keep;
  return m;
}

Tensor dropout(const Tensor& x, double rate, const Context& ctx) {
  if (!ctx.training || rate <= 0.0) return x;
  if (ctx.rng == nullptr) throw InvalidArgument("dropout in training mode needs a generator");
  return mul(x, Tensor::constant(dropout_mask(x.rows(), x.cols(), rate, *ctx.rng)));
}

Adam::Adam(const ParamStore& store, Options options) : options_(options) {
  for (const auto& [name, t] : store.params()) {
    params_.push_back(t);
    m_.push_back(Matrix::Zero(t.rows(), t.cols()));
    v_.push_back(Matrix::Zero(t.rows(), t.cols()));
  }
}

void Adam::step() {
  ++t_;
  const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const Matrix& g = params_[i].grad();
    if (g.size() == 0) continue;
    m_[i] = options_.beta1 * m_[i] + (1.0 - options_.beta1) * g;
    v_[i] = options_.beta2 * v_[i] + (1.0 - options_.beta2) * g.cwiseProduct(g);
    Matrix update = (m_[i] / c1).array() / ((v_[i] / c2).array().sqrt() + options_.eps);
    params_[i].mutable_value() -= options_.lr * update;
  }
}

GradCheckResult gradient_check(const std::function<Tensor()>& loss_fn, const std::map<std::string, Tensor>& params,
                               double step, double floor) {
  for (const auto& [name, t] : params) {
    Tensor h = t;
    h.zero_grad();
  }
  loss_fn().backward();
  std::map<std::string, Matrix> analytic;
  for (const auto& [name, t] : params) {
    analytic[name] = t.grad().size() ? t.grad() : Matrix::Zero(t.rows(), t.cols());
  }
  GradCheckResult result;
  NoGradGuard no_grad;
  for (const auto& [name, t] : params) {
    Tensor h = t;
    for (Eigen::Index i = 0; i < h.value().size(); ++i) {
      double& x = h.mutable_value().data()[i];
      const double saved = x;
      x = saved + step;
      const double up = loss_fn().item();
      x = saved - step;
      const double down = loss_fn().item();
      x = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[name].data()[i];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      if (rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_param = fmt::format("{}[{}] analytic {:.6g} numeric {:.6g}", name, i, a, numeric);
      }
      ++result.checked;
    }
  }
  return result;
}

}  // namespace scope::nn
