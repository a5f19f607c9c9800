// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/featurize/rbf.hpp"

#include <cmath>

#include "scope/util/error.hpp"

namespace scope::featurize {

std::vector<double> rbf_centers(int n, double d_min, double d_max) {
  if (n < 2 || !(d_max > d_min)) throw InvalidArgument("rbf: need n >= 2 and d_max > d_min");
  std::vector<double> mu(static_cast<std::size_t>(n));
  const double step = (d_max - d_min) / (n - 1);
  for (int k = 0; k < n; ++k) mu[static_cast<std::size_t>(k)] = d_min + step * k;
  return mu;
}

std::vector<double> rbf_expand(double distance, int n, double d_min, double d_max) {
  if (!(distance >= 0.0)) throw InvalidArgument("rbf: distance must be non-negative");
  const auto mu = rbf_centers(n, d_min, d_max);
  const double sigma = (d_max - d_min) / (n - 1);
  std::vector<double> out(mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const double z = distance - mu[k];
    out[k] = std::exp(-z * z / (2.0 * sigma * sigma));
  }
  return out;
}

}  // namespace scope::featurize
