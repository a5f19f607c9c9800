// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "scope/model/encoders.hpp"

namespace scope::model {

enum class Activation { kRelu, kSigmoid };

std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view name);

struct HeadConfig {
  int latent = 768;  // K
  int heads = 2;
  int pool = 3;      // s
  int hidden = 512;
  Activation activation = Activation::kRelu;
  double lambda = 1e-4;
};

// Plain-matrix views of the head parameters, used for attention export and
// as a reference evaluation outside the autograd graph.
struct BanWeights {
  Matrix u;  // D_d x K
  Matrix v;  // D_p x K
  Matrix q;  // heads x K
  Activation activation = Activation::kRelu;
};

struct DecoderWeights {
  Matrix w1;  // in x hidden
  Matrix b1;  // 1 x hidden
  Matrix w2;  // hidden x 1
  Matrix b2;  // 1 x 1
};

Matrix activate(const Matrix& x, Activation a);

// I^h = (act(H_d U) diag(q_h)) act(H_p V)^T, one N x M matrix per head.
std::vector<Matrix> attention_map(const Matrix& hd, const Matrix& hp, const BanWeights& w);

// f'_k = sum_ij act(H_d U)_ik I_ij act(H_p V)_jk per head, averaged over heads.
RowVector bilinear_pool(const Matrix& hd, const Matrix& hp, const std::vector<Matrix>& attention,
                        const BanWeights& w);

// Non-overlapping windows of width s summed; s must divide the length.
RowVector sum_pool(const RowVector& f, int s);

// Hidden affine + ReLU, final affine, logistic sigmoid.
double decode(const RowVector& f, const DecoderWeights& w);

// -sum[y log p + (1 - y) log(1 - p)] + lambda/2 * theta_sq, p clamped to
// [eps, 1 - eps]. theta_sq is the squared norm of the learnable tensors.
double loss(const std::vector<double>& p, const std::vector<int>& y, double theta_sq, double lambda,
            double eps = 1e-7);

// Squared L2 norm over learnable tensors (batch-norm buffers are not
// parameters and so never enter).
Tensor l2_penalty(const ParamStore& store, double lambda);
double squared_norm(const ParamStore& store);

// Differentiable bilinear attention network with sum pooling.
class BanHead {
 public:
  BanHead(ParamStore& store, const std::string& name, int drug_dim, int protein_dim, const HeadConfig& cfg, Rng& rng);
  // Pair p combines drug entity drug_of[p] with protein entity protein_of[p];
  // returns pairs x K/s.
  Tensor forward(const Encoded& drugs, const Encoded& proteins, const std::vector<int>& drug_of,
                 const std::vector<int>& protein_of) const;
  BanWeights weights() const;
  int out_dim() const { return static_cast<int>(u_.cols()) / pool_; }

 private:
  Tensor u_;
  Tensor v_;
  Tensor q_;
  Tensor pool_matrix_;
  int pool_;
  Activation activation_;
};

class Decoder {
 public:
  Decoder(ParamStore& store, const std::string& name, int in, int hidden, Rng& rng);
  Tensor operator()(const Tensor& f) const;  // logits, rows x 1
  DecoderWeights weights() const;

 private:
  nn::Linear hidden_;
  nn::Linear out_;
};

}  // namespace scope::model
