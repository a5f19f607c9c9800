// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scope/core/types.hpp"

namespace scope::balance {

struct ProteinBalanceProfile {
  std::string protein_id;
  std::size_t n_negative = 0;
  std::size_t n_positive = 0;
  double positive_ratio = 0.0;
};

// n1 / (n0 + n1). Throws InvalidArgument when both counts are zero.
double positive_ratio(std::size_t n0, std::size_t n1);

// Per-protein label counts, ordered by protein id.
std::vector<ProteinBalanceProfile> balance_profiles(const core::Corpus& corpus);

// Largest majority count that keeps the majority fraction at or below `cap`
// given `n_minority` minority records; floor(3 * n_minority) for cap = 0.75.
std::size_t max_majority(std::size_t n_minority, double majority_cap);

enum class FilterAction { kKept, kSubsampled, kDroppedNoMinority, kDroppedInsufficient };
std::string_view filter_action_name(FilterAction action);

struct FilterRow {
  std::string protein_id;
  std::size_t n0_before = 0;
  std::size_t n1_before = 0;
  std::size_t n0_after = 0;
  std::size_t n1_after = 0;
  FilterAction action = FilterAction::kKept;
};

struct FilterReport {
  std::vector<FilterRow> rows;
  std::size_t removed_interactions = 0;
  std::size_t dropped_proteins = 0;

  // TSV `protein_id	n0_before	n1_before	n0_after	n1_after	action`.
  std::string to_tsv() const;
};

struct BalanceOptions {
  std::uint64_t seed = 0;
  std::size_t min_interactions = 4;
  double majority_cap = 0.75;
};

// Target-level imbalance filter. Proteins whose majority class exceeds the
// cap lose a seeded uniform sample of majority records, down to the minimal
// removal that satisfies the cap. Proteins with no minority records, or with
// fewer than `min_interactions` records after subsampling, are removed
// entirely (registry entry included). Minority records are never removed.
struct BalanceResult {
  core::Corpus corpus;
  FilterReport report;
};
BalanceResult balance_filter(const core::Corpus& corpus, const BalanceOptions& options);

struct Histogram {
  double bin_width = 0.0;
  std::vector<std::size_t> counts;

  double lower_edge(std::size_t bin) const { return static_cast<double>(bin) * bin_width; }
  std::string to_tsv() const;
};

// Bin index for a ratio: bins are (k*w, (k+1)*w] with 0 in the first bin, so
// an interior boundary value falls in the lower bin and 1.0 in the top bin.
std::size_t histogram_bin(double ratio, double bin_width, std::size_t n_bins);

// Proteins per positive-ratio bin. Throws InvalidArgument unless
// 0 < bin_width <= 1.
Histogram ratio_histogram(const core::Corpus& corpus, double bin_width = 0.02);

}  // namespace scope::balance
