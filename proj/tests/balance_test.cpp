// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "scope/balance/balance.hpp"
#include "scope/balance/split.hpp"
#include "scope/util/error.hpp"
#include "test_util.hpp"

namespace scope::balance {
namespace {

using scope::testing::add_compound;
using scope::testing::add_protein;
using scope::testing::interaction;

void add_protein_block(core::Corpus& c, const std::string& p, std::size_t n1, std::size_t n0) {
  add_protein(c, p);
  for (std::size_t i = 0; i < n1 + n0; ++i) {
    const auto cid = fmt::format("{}_c{}", p, i);
    add_compound(c, cid);
    c.interactions.push_back(interaction(p, cid, i < n1 ? 1 : 0));
  }
}

std::map<std::string, std::pair<std::size_t, std::size_t>> counts_by_protein(const core::Corpus& c) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> out;  // (n0, n1)
  for (const auto& r : c.interactions) {
    auto& e = out[r.protein_id];
    (r.label ? e.second : e.first)++;
  }
  return out;
}

TEST(PositiveRatio, Examples) {
  EXPECT_DOUBLE_EQ(positive_ratio(1, 3), 0.75);
  EXPECT_DOUBLE_EQ(positive_ratio(5, 5), 0.5);
  EXPECT_DOUBLE_EQ(positive_ratio(0, 7), 1.0);
  EXPECT_THROW(positive_ratio(0, 0), InvalidArgument);
}

TEST(MaxMajority, MinimalRemovalArithmetic) {
  for (std::size_t n = 1; n < 200; ++n) EXPECT_EQ(max_majority(n, 0.75), 3 * n) << n;
  EXPECT_EQ(max_majority(3, 0.6), 4u);  // floor(1.5 * 3)
}

TEST(BalanceFilter, SubsamplesMajorityToCap) {
  core::Corpus c;
  add_protein_block(c, "P", 80, 20);
  auto r = balance_filter(c, {.seed = 1});
  auto counts = counts_by_protein(r.corpus);
  EXPECT_EQ(counts["P"].second, 60u);
  EXPECT_EQ(counts["P"].first, 20u);
  EXPECT_DOUBLE_EQ(positive_ratio(counts["P"].first, counts["P"].second), 0.75);
  ASSERT_EQ(r.report.rows.size(), 1u);
  EXPECT_EQ(r.report.rows[0].action, FilterAction::kSubsampled);
  EXPECT_EQ(r.report.removed_interactions, 20u);
}

TEST(BalanceFilter, BalancedProteinUnchanged) {
  core::Corpus c;
  add_protein_block(c, "P", 6, 6);
  auto r = balance_filter(c, {.seed = 1});
  EXPECT_EQ(r.corpus.interactions, c.interactions);
  EXPECT_EQ(r.report.rows[0].action, FilterAction::kKept);
}

TEST(BalanceFilter, ProteinWithoutMinorityIsDiscarded) {
  core::Corpus c;
  add_protein_block(c, "P", 50, 0);
  add_protein_block(c, "Q", 3, 3);
  auto r = balance_filter(c, {.seed = 1});
  EXPECT_FALSE(r.corpus.proteins.contains("P"));
  for (const auto& i : r.corpus.interactions) EXPECT_NE(i.protein_id, "P");
  EXPECT_EQ(r.report.rows[0].action, FilterAction::kDroppedNoMinority);
  EXPECT_EQ(r.report.dropped_proteins, 1u);
  EXPECT_EQ(r.report.removed_interactions, 50u);
}

TEST(BalanceFilter, TooFewInteractionsDropped) {
  core::Corpus c;
  add_protein_block(c, "P", 2, 1);
  auto r = balance_filter(c, {.seed = 1});
  EXPECT_TRUE(r.corpus.interactions.empty());
  EXPECT_EQ(r.report.rows[0].action, FilterAction::kDroppedInsufficient);
}

TEST(BalanceFilter, InvariantsOnRandomCorpora) {
  Rng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    core::Corpus c;
    for (int p = 0; p < 8; ++p) {
      add_protein_block(c, fmt::format("P{}", p), rng.uniform_index(40), rng.uniform_index(40));
    }
    auto r = balance_filter(c, {.seed = static_cast<std::uint64_t>(trial)});
    auto before = counts_by_protein(c);
    auto after = counts_by_protein(r.corpus);
    for (const auto& [p, n] : after) {
      const double ratio = positive_ratio(n.first, n.second);
      EXPECT_GE(ratio, 0.25 - 1e-12);
      EXPECT_LE(ratio, 0.75 + 1e-12);
      EXPECT_GE(n.first + n.second, 4u);
      // The minority class is never touched.
      const auto [b0, b1] = before[p];
      if (b0 <= b1) EXPECT_EQ(n.first, b0);
      if (b1 <= b0) EXPECT_EQ(n.second, b1);
    }
    // Never adds records: output is a sub-multiset of the input.
    for (const auto& rec : r.corpus.interactions) {
      EXPECT_NE(std::find(c.interactions.begin(), c.interactions.end(), rec), c.interactions.end());
    }
    EXPECT_EQ(r.corpus.interactions.size() + r.report.removed_interactions, c.interactions.size());
  }
}

TEST(BalanceFilter, SeedDeterminesSubsample) {
  core::Corpus c;
  add_protein_block(c, "P", 90, 10);
  auto a = balance_filter(c, {.seed = 4});
  auto b = balance_filter(c, {.seed = 4});
  auto d = balance_filter(c, {.seed = 5});
  EXPECT_EQ(a.corpus, b.corpus);
  EXPECT_NE(a.corpus.interactions, d.corpus.interactions);
}

TEST(BalanceFilter, ReportTsvHeader) {
  core::Corpus c;
  add_protein_block(c, "P", 6, 6);
  auto tsv = balance_filter(c, {}).report.to_tsv();
  EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "protein_id\tn0_before\tn1_before\tn0_after\tn1_after\taction");
  EXPECT_NE(tsv.find("P\t6\t6\t6\t6\tkept"), std::string::npos);
}

TEST(Histogram, HandEnumeration) {
  core::Corpus c;
  add_protein_block(c, "P", 2, 2);
  auto h = ratio_histogram(c, 0.5);
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{1, 0}));
}

TEST(Histogram, EmptyCorpusAndBoundaries) {
  auto h = ratio_histogram(core::Corpus{}, 0.02);
  EXPECT_EQ(h.counts.size(), 50u);
  EXPECT_TRUE(std::all_of(h.counts.begin(), h.counts.end(), [](auto n) { return n == 0; }));
  EXPECT_EQ(histogram_bin(0.0, 0.25, 4), 0u);
  EXPECT_EQ(histogram_bin(0.25, 0.25, 4), 0u);
  EXPECT_EQ(histogram_bin(0.26, 0.25, 4), 1u);
  EXPECT_EQ(histogram_bin(1.0, 0.25, 4), 3u);
  EXPECT_THROW(ratio_histogram(core::Corpus{}, 0.0), InvalidArgument);
  EXPECT_THROW(ratio_histogram(core::Corpus{}, 1.5), InvalidArgument);
}

TEST(Histogram, FilteredCorpusHasNoMassOutsideBand) {
  Rng rng(8);
  core::Corpus c;
  for (int p = 0; p < 30; ++p) add_protein_block(c, fmt::format("P{}", p), rng.uniform_index(30), rng.uniform_index(30));
  auto h = ratio_histogram(balance_filter(c, {.seed = 2}).corpus, 0.02);
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    // Bin b covers (b*w, (b+1)*w]; only bins inside [0.25, 0.75] can be populated.
    const double lo = h.lower_edge(b);
    const double hi = lo + h.bin_width;
    if (hi < 0.25 - 1e-9 || lo >= 0.75 - 1e-9) EXPECT_EQ(h.counts[b], 0u) << b;
  }
}

core::Corpus split_corpus(std::size_t n_compounds, std::size_t n_proteins, Rng& rng) {
  core::Corpus c;
  for (std::size_t p = 0; p < n_proteins; ++p) add_protein(c, fmt::format("P{:03d}", p));
  for (std::size_t k = 0; k < n_compounds; ++k) {
    const auto cid = fmt::format("C{:04d}", k);
    add_compound(c, cid);
    const auto deg = 1 + rng.uniform_index(3);
    for (std::size_t d = 0; d < deg; ++d) {
      c.interactions.push_back(
          interaction(fmt::format("P{:03d}", rng.uniform_index(n_proteins)), cid, static_cast<int>(rng.uniform_index(2))));
    }
  }
  return c;
}

TEST(Split, SevenOneTwoOnHundredCompounds) {
  core::Corpus c;
  add_protein(c, "P");
  for (int k = 0; k < 100; ++k) {
    add_compound(c, fmt::format("C{:03d}", k));
    c.interactions.push_back(interaction("P", fmt::format("C{:03d}", k), k % 2));
  }
  auto m = semi_inductive_split(c, 42);
  EXPECT_EQ(m.counts(), (std::array<std::size_t, 3>{70, 10, 20}));
}

TEST(Split, TooFewCompoundsIsError) {
  core::Corpus c;
  add_protein(c, "P");
  for (int k = 0; k < 9; ++k) {
    add_compound(c, fmt::format("C{}", k));
    c.interactions.push_back(interaction("P", fmt::format("C{}", k), 1));
  }
  EXPECT_THROW(semi_inductive_split(c, 1), InvalidArgument);
}

TEST(Split, RepairMovesOnlyCompoundToTrain) {
  // Three compounds; protein Q is reached only through c3, which starts in test.
  core::Corpus c;
  add_protein(c, "P");
  add_protein(c, "Q");
  for (auto id : {"c1", "c2", "c3"}) add_compound(c, id);
  c.interactions = {interaction("P", "c1", 1), interaction("P", "c2", 0), interaction("P", "c3", 1),
                    interaction("Q", "c3", 0)};
  SplitManifest m;
  m.assignment = {{"c1", Split::kTrain}, {"c2", Split::kVal}, {"c3", Split::kTest}};
  // Simulation of the rule: missing proteins {Q}; candidate c3 covers it.
  EXPECT_EQ(repair_containment(c, m), 1u);
  EXPECT_EQ(m.assignment["c3"], Split::kTrain);
  EXPECT_EQ(m.assignment["c2"], Split::kVal);
  EXPECT_TRUE(std::ranges::includes(proteins_in(c, m, Split::kTrain), proteins_in(c, m, Split::kTest)));
}

TEST(Split, InvariantsOnRandomCorpora) {
  Rng rng(13);
  for (int trial = 0; trial < 15; ++trial) {
    auto c = split_corpus(40 + rng.uniform_index(60), 12, rng);
    auto m = semi_inductive_split(c, static_cast<std::uint64_t>(trial));
    EXPECT_EQ(m.assignment.size(), c.compounds.size());
    auto train = proteins_in(c, m, Split::kTrain);
    EXPECT_TRUE(std::ranges::includes(train, proteins_in(c, m, Split::kVal)));
    EXPECT_TRUE(std::ranges::includes(train, proteins_in(c, m, Split::kTest)));
    std::size_t total = 0;
    for (auto s : {Split::kTrain, Split::kVal, Split::kTest}) total += interactions_in(c, m, s).size();
    EXPECT_EQ(total, c.interactions.size());
  }
}

TEST(Split, SameSeedSameBytes) {
  Rng rng(17);
  auto c = split_corpus(50, 5, rng);
  auto a = semi_inductive_split(c, 9);
  auto b = semi_inductive_split(c, 9);
  EXPECT_EQ(a.to_tsv(), b.to_tsv());
  EXPECT_EQ(SplitManifest::from_tsv(a.to_tsv()), a);
}

}  // namespace
}  // namespace scope::balance
