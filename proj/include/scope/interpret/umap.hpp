// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>

#include "scope/util/matrix.hpp"

namespace scope::interpret {

struct UmapParams {
  int n_neighbors = 15;
  double min_dist = 0.1;
  double spread = 1.0;
  int n_components = 2;
  int n_epochs = 500;
  int negative_sample_rate = 5;
  std::uint64_t seed = 42;
};

// Least-squares fit of 1 / (1 + a d^(2b)) to the target membership curve
// (1 below min_dist, exp(-(d - min_dist) / spread) above).
std::pair<double, double> fit_ab(double spread, double min_dist);

// Euclidean UMAP: exact kNN graph, smooth-kNN memberships, fuzzy union,
// spectral initialisation and single-threaded SGD with negative sampling.
// Deterministic for a fixed seed. Rows of `x` are samples.
Matrix umap_embed(const Matrix& x, const UmapParams& params = {});

}  // namespace scope::interpret
