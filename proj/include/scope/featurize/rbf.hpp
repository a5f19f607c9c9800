// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace scope::featurize {

// Gaussian basis with n centers evenly spaced on [d_min, d_max] and width
// equal to the center spacing.
std::vector<double> rbf_centers(int n = 16, double d_min = 0.0, double d_max = 4.5);
std::vector<double> rbf_expand(double distance, int n = 16, double d_min = 0.0, double d_max = 4.5);

}  // namespace scope::featurize
