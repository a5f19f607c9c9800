// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace scope::train {

struct EvalReport {
  double auroc = 0.0;
  double auprc = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double threshold = 0.0;  // predicted positive iff score > threshold; may be +-inf
  std::size_t n_pairs = 0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;  // infinite thresholds become "inf"/"-inf"
};

// Rank statistic with midranks for ties.
double auroc(std::span<const double> scores, std::span<const int> labels);
// Average precision: sum over distinct thresholds (descending) of
// (R_k - R_{k-1}) * P_k.
double auprc(std::span<const double> scores, std::span<const int> labels);

struct ThresholdChoice {
  double threshold = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};
// Scans -inf, midpoints between consecutive distinct scores and +inf; the
// largest threshold wins a tie in F1.
ThresholdChoice optimal_f1(std::span<const double> scores, std::span<const int> labels);

// Throws InvalidArgument when sizes differ, fewer than two samples, labels
// outside {0,1}, non-finite scores or only one class present.
EvalReport compute_metrics(std::span<const double> scores, std::span<const int> labels, std::uint64_t seed = 0);

// Mean and sample standard deviation of repeated runs; needs n >= 2.
struct Summary {
  double mean = 0.0;
  double std = 0.0;
  std::string str() const;  // "m±s", three decimals
};
Summary summarize(std::span<const double> values);

}  // namespace scope::train
