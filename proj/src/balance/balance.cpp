// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/balance/balance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>

#include <fmt/format.h>

#include "scope/util/error.hpp"
#include "scope/util/rng.hpp"

namespace scope::balance {

double positive_ratio(std::size_t n0, std::size_t n1) {
  if (n0 + n1 == 0) throw InvalidArgument("positive_ratio: protein has no interactions");
  return static_cast<double>(n1) / static_cast<double>(n0 + n1);
}

std::vector<ProteinBalanceProfile> balance_profiles(const core::Corpus& corpus) {
  std::map<std::string, ProteinBalanceProfile> by_protein;
  for (const auto& r : corpus.interactions) {
    auto& p = by_protein[r.protein_id];
    p.protein_id = r.protein_id;
    (r.label == 1 ? p.n_positive : p.n_negative) += 1;
  }
  std::vector<ProteinBalanceProfile> out;
  out.reserve(by_protein.size());
  for (auto& [_, p] : by_protein) {
    p.positive_ratio = positive_ratio(p.n_negative, p.n_positive);
    out.push_back(p);
  }
  return out;
}

std::size_t max_majority(std::size_t n_minority, double majority_cap) {
  if (!(majority_cap > 0.5 && majority_cap < 1.0)) {
    throw InvalidArgument("majority_cap must lie in (0.5, 1)");
  }
  auto n = static_cast<std::size_t>(std::floor(majority_cap * static_cast<double>(n_minority) /
                                               (1.0 - majority_cap)));
  // Correct any rounding drift against the exact fraction test.
  auto fits = [&](std::size_t maj) {
    return static_cast<double>(maj) <= majority_cap * static_cast<double>(maj + n_minority);
  };
  while (n > 0 && !fits(n)) --n;
  while (fits(n + 1)) ++n;
  return n;
}

std::string_view filter_action_name(FilterAction action) {
  switch (action) {
    case FilterAction::kKept: return "kept";
    case FilterAction::kSubsampled: return "subsampled";
    case FilterAction::kDroppedNoMinority: return "dropped_no_minority";
    case FilterAction::kDroppedInsufficient: return "dropped_insufficient";
  }
  return "kept";
}

std::string FilterReport::to_tsv() const {
  std::string out = "protein_id\tn0_before\tn1_before\tn0_after\tn1_after\taction\n";
  for (const auto& r : rows) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", r.protein_id, r.n0_before, r.n1_before,
                       r.n0_after, r.n1_after, filter_action_name(r.action));
  }
  return out;
}

BalanceResult balance_filter(const core::Corpus& corpus, const BalanceOptions& options) {
  std::map<std::string, std::vector<std::size_t>> by_protein;
  for (std::size_t i = 0; i < corpus.interactions.size(); ++i) {
    by_protein[corpus.interactions[i].protein_id].push_back(i);
  }

  std::vector<bool> keep(corpus.interactions.size(), true);
  BalanceResult result;
  std::set<std::string> dropped;
  for (const auto& [protein, indices] : by_protein) {
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i : indices) {
      (corpus.interactions[i].label == 1 ? pos : neg).push_back(i);
    }
    FilterRow row{protein, neg.size(), pos.size(), neg.size(), pos.size(), FilterAction::kKept};
    auto& minority = pos.size() < neg.size() ? pos : neg;
    auto& majority = pos.size() < neg.size() ? neg : pos;

    auto drop_all = [&](FilterAction action) {
      for (std::size_t i : indices) keep[i] = false;
      row.n0_after = row.n1_after = 0;
      row.action = action;
      result.report.removed_interactions += indices.size();
      ++result.report.dropped_proteins;
      dropped.insert(protein);
    };

    if (minority.empty()) {
      drop_all(FilterAction::kDroppedNoMinority);
      result.report.rows.push_back(row);
      continue;
    }
    const std::size_t cap = max_majority(minority.size(), options.majority_cap);
    if (majority.size() > cap) {
      // Per-protein stream: the outcome does not depend on iteration order.
      Rng rng = Rng::derive(options.seed, protein);
      std::vector<std::size_t> order = majority;
      rng.shuffle(std::span<std::size_t>(order));
      for (std::size_t k = cap; k < order.size(); ++k) keep[order[k]] = false;
      result.report.removed_interactions += order.size() - cap;
      majority.resize(cap);
      row.action = FilterAction::kSubsampled;
      if (&majority == &pos) {
        row.n1_after = cap;
      } else {
        row.n0_after = cap;
      }
    }
    if (row.n0_after + row.n1_after < options.min_interactions) {
      // Undo the partial accounting from subsampling before dropping.
      result.report.removed_interactions -= (row.n0_before + row.n1_before) -
                                            (row.n0_after + row.n1_after);
      drop_all(FilterAction::kDroppedInsufficient);
    }
    result.report.rows.push_back(row);
  }

  result.corpus.compounds = corpus.compounds;
  for (const auto& [id, p] : corpus.proteins) {
    if (!dropped.contains(id)) result.corpus.proteins.emplace(id, p);
  }
  for (std::size_t i = 0; i < corpus.interactions.size(); ++i) {
    if (keep[i]) result.corpus.interactions.push_back(corpus.interactions[i]);
  }
  return result;
}

std::size_t histogram_bin(double ratio, double bin_width, std::size_t n_bins) {
  // Tolerance absorbs representation error at exact boundaries (0.5/0.02).
  const double scaled = ratio / bin_width;
  double k = std::ceil(scaled - 1e-9) - 1.0;
  if (k < 0.0) k = 0.0;
  return std::min(static_cast<std::size_t>(k), n_bins - 1);
}

std::string Histogram::to_tsv() const {
  std::string out = "bin_lower\tbin_upper\tproteins\n";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out += fmt::format("{:.4f}\t{:.4f}\t{}\n", lower_edge(i),
                       std::min(1.0, lower_edge(i) + bin_width), counts[i]);
  }
  return out;
}

Histogram ratio_histogram(const core::Corpus& corpus, double bin_width) {
  if (!(bin_width > 0.0 && bin_width <= 1.0)) {
    throw InvalidArgument(fmt::format("bin_width {} outside (0, 1]", bin_width));
  }
  Histogram h;
  h.bin_width = bin_width;
  const auto n_bins = static_cast<std::size_t>(std::ceil(1.0 / bin_width - 1e-9));
  h.counts.assign(n_bins, 0);
  for (const auto& p : balance_profiles(corpus)) {
    ++h.counts[histogram_bin(p.positive_ratio, bin_width, n_bins)];
  }
  return h;
}

}  // namespace scope::balance
