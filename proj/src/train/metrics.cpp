// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/train/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scope/util/error.hpp"

namespace scope::train {
namespace {

struct Counts {
  std::size_t pos = 0;
  std::size_t neg = 0;
};

Counts validate(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw InvalidArgument(fmt::format("metrics: {} scores but {} labels", scores.size(), labels.size()));
  }
  if (scores.size() < 2) throw InvalidArgument("metrics: need at least two samples");
  Counts c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw InvalidArgument("metrics: non-finite score");
    if (labels[i] == 1) {
      ++c.pos;
    } else if (labels[i] == 0) {
      ++c.neg;
    } else {
      throw InvalidArgument(fmt::format("metrics: label {} is not 0 or 1", labels[i]));
    }
  }
  if (c.pos == 0 || c.neg == 0) throw InvalidArgument("metrics: labels contain a single class");
  return c;
}

std::vector<std::size_t> order_by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  return order;
}


}  // namespace

double auroc(std::span<const double> scores, std::span<const int> labels) {
  const Counts c = validate(scores, labels);
  const auto order = order_by_score(scores);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) rank_sum += midrank;
    }
    i = j;
  }
  const double p = static_cast<double>(c.pos);
  const double n = static_cast<double>(c.neg);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

double auprc(std::span<const double> scores, std::span<const int> labels) {
  const Counts c = validate(scores, labels);
  auto order = order_by_score(scores);
  std::reverse(order.begin(), order.end());
  double ap = 0.0;
  double prev_recall = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? tp : fp) += 1;
      ++j;
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(c.pos);
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

ThresholdChoice optimal_f1(std::span<const double> scores, std::span<const int> labels) {
  const Counts c = validate(scores, labels);
  const auto order = order_by_score(scores);
  const double inf = std::numeric_limits<double>::infinity();
  // Candidate thresholds ascending; at each, positives are the samples
  // strictly above it. Start at -inf (everything positive).
  ThresholdChoice best;
  std::size_t tp = c.pos;
  std::size_t fp = c.neg;
  auto consider = [&](double threshold) {
    const std::size_t fn = c.pos - tp;
    const double f1 = tp == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    if (f1 >= best.f1) best = {threshold, f1, tp, fp, c.neg - fp, fn};
  };
  best = {-inf, -1.0, 0, 0, 0, 0};
  consider(-inf);
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? tp : fp) -= 1;
      ++j;
    }
    const double t = j < order.size() ? 0.5 * (scores[order[i]] + scores[order[j]]) : inf;
    consider(t);
    i = j;
  }
  return best;
}

EvalReport compute_metrics(std::span<const double> scores, std::span<const int> labels, std::uint64_t seed) {
  const Counts c = validate(scores, labels);
  EvalReport r;
  r.auroc = auroc(scores, labels);
  r.auprc = auprc(scores, labels);
  const ThresholdChoice t = optimal_f1(scores, labels);
  r.f1 = t.f1;
  r.threshold = t.threshold;
  r.accuracy = static_cast<double>(t.tp + t.tn) / static_cast<double>(scores.size());
  r.sensitivity = static_cast<double>(t.tp) / static_cast<double>(c.pos);
  r.specificity = static_cast<double>(t.tn) / static_cast<double>(c.neg);
  r.n_pairs = scores.size();
  r.seed = seed;
  return r;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json threshold_json = threshold;
  if (std::isinf(threshold)) threshold_json = threshold > 0 ? "inf" : "-inf";
  return {{"auroc", auroc},         {"auprc", auprc},
          {"f1", f1},               {"accuracy", accuracy},
          {"sensitivity", sensitivity}, {"specificity", specificity},
          {"threshold", threshold_json}, {"n_pairs", n_pairs},
          {"seed", seed}};
}

std::string Summary::str() const { return fmt::format("{:.3f}±{:.3f}", mean, std); }

Summary summarize(std::span<const double> values) {
  if (values.size() < 2) throw InvalidArgument("summary needs at least two runs");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return {*lo, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace scope::train
