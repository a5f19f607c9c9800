// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "scope/nn/tensor.hpp"

namespace scope::nn {

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
// a (R x C) plus a 1 x C row broadcast over rows.
Tensor add_row(const Tensor& a, const Tensor& row);
// a (R x C) times an R x 1 column broadcast over columns.
Tensor mul_col(const Tensor& a, const Tensor& col);

Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);

// Elementwise sqrt(x^2 + y^2 + z^2 + eps): the norm of 3-vector channels
// stored as one matrix per spatial component.
Tensor norm3(const Tensor& x, const Tensor& y, const Tensor& z, double eps = 1e-8);

Tensor sum_all(const Tensor& a);
Tensor sum_squares(const Tensor& a);
// Column sums, 1 x C.
Tensor sum_rows(const Tensor& a);

Tensor concat_cols(const std::vector<Tensor>& parts);
// Index -1 yields a zero row (padding).
Tensor gather_rows(const Tensor& a, const std::vector<int>& index);
// out[index[i]] += a[i]; out has n rows.
Tensor scatter_add_rows(const Tensor& a, const std::vector<int>& index, Eigen::Index n);
// out[dst[e]] += a[src[e]] for every edge; out has n rows.
Tensor propagate(const Tensor& a, const std::vector<int>& src, const std::vector<int>& dst, Eigen::Index n);
// First n rows, zero-padded when a has fewer.
Tensor fit_rows(const Tensor& a, Eigen::Index n);
// Rows of the (R - k + 1) x (k * C) sliding-window matrix used for 1-D
// convolution; row t holds rows t..t+k-1 of a, concatenated.
Tensor unfold(const Tensor& a, int k);

struct BatchStats {
  RowVector mean;
  RowVector var;  // biased
};
// Normalises over rows with the batch's own statistics, then applies the
// affine gamma, beta (1 x C). Statistics are returned for running averages.
Tensor batch_norm_train(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps, BatchStats* stats);
Tensor batch_norm_eval(const Tensor& x, const Tensor& gamma, const Tensor& beta, const RowVector& mean,
                       const RowVector& var, double eps);

// Sum over samples of binary cross-entropy on sigmoid(logits) (B x 1),
// with probabilities clamped to [eps, 1 - eps].
Tensor bce_with_logits(const Tensor& logits, const std::vector<double>& labels, double eps = 1e-7);

struct RowRange {
  Eigen::Index start = 0;
  Eigen::Index size = 0;
};

// Bilinear attention and pooling for a batch of (drug, protein) pairs.
// a = act(H_d U) and b_rows = act(H_p V) hold stacked rows; pair p uses
// rows drug[p] of a and protein[p] of b_rows (ranges may be shared between
// pairs). q is heads x K. For each pair and head h,
//   I^h = (a diag(q_h)) b^T,    f'^h_k = sum_ij a_ik I^h_ij b_jk,
// and the result row is the mean of f'^h over heads (pairs x K).
Tensor bilinear_attention_pool(const Tensor& a, const Tensor& b_rows, const Tensor& q,
                               const std::vector<RowRange>& drug, const std::vector<RowRange>& protein);

}  // namespace scope::nn
