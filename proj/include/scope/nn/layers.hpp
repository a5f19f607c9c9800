// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "scope/nn/ops.hpp"
#include "scope/nn/tensor.hpp"
#include "scope/util/rng.hpp"

namespace scope::nn {

// Named learnable tensors plus non-learnable buffers (batch-norm running
// statistics). Names are unique; iteration order is by name.
class ParamStore {
 public:
  Tensor create(const std::string& name, Matrix init);
  std::shared_ptr<Matrix> create_buffer(const std::string& name, Matrix init);

  const std::map<std::string, Tensor>& params() const { return params_; }
  const std::map<std::string, std::shared_ptr<Matrix>>& buffers() const { return buffers_; }
  Tensor param(const std::string& name) const;
  std::size_t num_scalars() const;

  void zero_grad();
  // Overwrites values in place so that layers holding handles see them.
  void copy_values_from(const ParamStore& other);

 private:
  std::map<std::string, Tensor> params_;
  std::map<std::string, std::shared_ptr<Matrix>> buffers_;
};

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)).
Matrix uniform_fan_in(Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng);

// Per-forward state: training flag and the generator for dropout masks.
struct Context {
  bool training = false;
  Rng* rng = nullptr;
};

// y = x W + b, W is in x out; bias initialised to zero.
class Linear {
 public:
  Linear() = default;
  Linear(ParamStore& store, const std::string& name, Eigen::Index in, Eigen::Index out, Rng& rng,
         bool bias = true);
  Tensor operator()(const Tensor& x) const;
  const Tensor& weight() const { return weight_; }
  const Tensor& bias() const { return bias_; }
  Eigen::Index in_dim() const { return weight_.rows(); }
  Eigen::Index out_dim() const { return weight_.cols(); }

 private:
  Tensor weight_;
  Tensor bias_;
};

class BatchNorm {
 public:
  BatchNorm() = default;
  BatchNorm(ParamStore& store, const std::string& name, Eigen::Index dim, double momentum = 0.1,
            double eps = 1e-5);
  // Training mode normalises with batch statistics and updates the running
  // averages (unbiased variance, as is conventional).
  Tensor operator()(const Tensor& x, const Context& ctx) const;

 private:
  Tensor gamma_;
  Tensor beta_;
  std::shared_ptr<Matrix> running_mean_;
  std::shared_ptr<Matrix> running_var_;
  double momentum_ = 0.1;
  double eps_ = 1e-5;
};

// Inverted dropout: kept entries are scaled by 1/(1-rate). Identity outside
// training or when rate is 0.
Tensor dropout(const Tensor& x, double rate, const Context& ctx);
// Dropout mask shared across several tensors (vector channels must drop
// the same channel in all three spatial components).
Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, Rng& rng);

class Adam {
 public:
  struct Options {
    double lr = 5e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
  };
  Adam(const ParamStore& store, Options options);
  void step();
  long long steps() const { return t_; }

 private:
  std::vector<Tensor> params_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  Options options_;
  long long t_ = 0;
};

// Central-difference gradient check over every scalar of the given
// parameters. Relative error per element is |a - n| / max(|a|, |n|, floor).
struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_param;
  std::size_t checked = 0;
};
GradCheckResult gradient_check(const std::function<Tensor()>& loss_fn, const std::map<std::string, Tensor>& params,
                               double step = 1e-5, double floor = 1e-6);

}  // namespace scope::nn
