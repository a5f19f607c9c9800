// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "scope/util/matrix.hpp"

namespace scope::interpret {

struct OpticsParams {
  int min_samples = 5;
  double xi = 0.05;
  // <= 0: min_samples; in (0, 1): fraction of the sample count; else a count.
  // With min_samples as the floor, xi extraction on a UMAP projection splits
  // each dense group into many leaf clusters.
  double min_cluster_size = 0.25;
  double max_eps = std::numeric_limits<double>::infinity();
  bool predecessor_correction = true;
};

struct OpticsResult {
  std::vector<int> ordering;
  std::vector<double> core_distances;
  std::vector<double> reachability;  // indexed by sample
  std::vector<int> predecessor;
  std::vector<std::pair<int, int>> clusters;  // [start, end] in ordering positions
  std::vector<int> labels;                    // -1 = noise
};

// OPTICS ordering (Euclidean) with steep-area "xi" cluster extraction; leaf
// clusters take precedence over the clusters enclosing them.
OpticsResult optics(const Matrix& x, const OpticsParams& params = {});

}  // namespace scope::interpret
