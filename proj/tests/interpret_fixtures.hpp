// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <vector>

#include "scope/util/matrix.hpp"
#include "scope/util/rng.hpp"

namespace scope::testing {

struct Blobs {
  std::vector<RowVector> vectors;
  std::vector<int> truth;
};

// Non-negative residue profiles: `per_blob` noisy copies of two attention
// peaks at opposite ends of a `length`-residue protein.
inline Blobs two_blobs(int per_blob, int length, std::uint64_t seed) {
  Rng rng(seed);
  Blobs b;
  for (int blob = 0; blob < 2; ++blob) {
    const double centre = blob == 0 ? 0.25 * length : 0.75 * length;
    for (int i = 0; i < per_blob; ++i) {
      RowVector v(length);
      for (int r = 0; r < length; ++r) {
        const double d = (r - centre) / 3.0;
        v(r) = std::exp(-0.5 * d * d) * (1.0 + 0.1 * rng.normal()) + 0.02 * rng.uniform();
        v(r) = std::max(v(r), 0.0);
      }
      b.vectors.push_back(v);
      b.truth.push_back(blob);
    }
  }
  return b;
}

}  // namespace scope::testing
