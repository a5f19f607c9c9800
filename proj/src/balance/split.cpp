// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/balance/split.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <fmt/format.h>

#include "scope/util/error.hpp"
#include "scope/util/rng.hpp"
#include "scope/util/text.hpp"

namespace scope::balance {

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw ParseError(fmt::format("unknown split '{}'", name));
}

std::array<std::size_t, 3> SplitManifest::counts() const {
  std::array<std::size_t, 3> c{0, 0, 0};
  for (const auto& [_, s] : assignment) ++c[static_cast<std::size_t>(s)];
  return c;
}

std::set<std::string> SplitManifest::compounds_in(Split split) const {
  std::set<std::string> out;
  for (const auto& [id, s] : assignment) {
    if (s == split) out.insert(id);
  }
  return out;
}

std::string SplitManifest::to_tsv() const {
  std::string out = fmt::format("#seed={}\ncompound_id\tsplit\n", seed);
  for (const auto& [id, s] : assignment) out += fmt::format("{}\t{}\n", id, split_name(s));
  return out;
}

SplitManifest SplitManifest::from_tsv(std::string_view text) {
  SplitManifest manifest;
  if (text.starts_with("#seed=")) {
    auto line = text.substr(6, text.find('\n') - 6);
    auto seed = parse_int(line);
    if (!seed) throw ParseError("manifest: bad seed line");
    manifest.seed = static_cast<std::uint64_t>(*seed);
  }
  TsvTable table = parse_tsv(text);
  const auto id_col = table.require_column("compound_id");
  const auto split_col = table.require_column("split");
  for (const auto& row : table.rows) manifest.assignment[row[id_col]] = parse_split(row[split_col]);
  return manifest;
}

void SplitManifest::write(const std::filesystem::path& path) const { write_file(path, to_tsv()); }

SplitManifest SplitManifest::read(const std::filesystem::path& path) {
  return from_tsv(read_file(path));
}

std::set<std::string> proteins_in(const core::Corpus& corpus, const SplitManifest& manifest,
                                  Split split) {
  std::set<std::string> out;
  for (const auto& r : corpus.interactions) {
    auto it = manifest.assignment.find(r.compound_id);
    if (it != manifest.assignment.end() && it->second == split) out.insert(r.protein_id);
  }
  return out;
}

std::size_t repair_containment(const core::Corpus& corpus, SplitManifest& manifest) {
  std::map<std::string, std::set<std::string>> proteins_of;
  for (const auto& r : corpus.interactions) proteins_of[r.compound_id].insert(r.protein_id);

  std::size_t moved = 0;
  while (true) {
    const auto train = proteins_in(corpus, manifest, Split::kTrain);
    std::set<std::string> missing;
    for (Split s : {Split::kVal, Split::kTest}) {
      for (const auto& p : proteins_in(corpus, manifest, s)) {
        if (!train.contains(p)) missing.insert(p);
      }
    }
    if (missing.empty()) break;

    const std::string* best = nullptr;
    std::size_t best_cover = 0;
    for (const auto& [compound, split] : manifest.assignment) {
      if (split == Split::kTrain) continue;
      auto it = proteins_of.find(compound);
      if (it == proteins_of.end()) continue;
      std::size_t cover = 0;
      for (const auto& p : it->second) cover += missing.contains(p) ? 1 : 0;
      // Strict > keeps the smallest id on ties since the map is ordered.
      if (cover > best_cover) {
        best_cover = cover;
        best = &compound;
      }
    }
    if (best == nullptr) break;  // unreachable: a missing protein has a val/test compound
    manifest.assignment[*best] = Split::kTrain;
    ++moved;
  }
  manifest.repaired_compounds += moved;
  return moved;
}

SplitManifest semi_inductive_split(const core::Corpus& corpus, std::uint64_t seed,
                                   std::array<double, 3> ratio) {
  if (std::abs(ratio[0] + ratio[1] + ratio[2] - 1.0) > 1e-9 ||
      std::any_of(ratio.begin(), ratio.end(), [](double r) { return r < 0.0; })) {
    throw InvalidArgument("split ratios must be non-negative and sum to 1");
  }
  std::set<std::string> compound_set;
  for (const auto& [id, _] : corpus.compounds) compound_set.insert(id);
  for (const auto& r : corpus.interactions) compound_set.insert(r.compound_id);
  if (compound_set.size() < 10) {
    throw InvalidArgument(
        fmt::format("semi_inductive_split needs at least 10 compounds, got {}", compound_set.size()));
  }
  std::vector<std::string> compounds(compound_set.begin(), compound_set.end());
  Rng rng(seed);
  rng.shuffle(std::span<std::string>(compounds));

  const std::size_t n = compounds.size();
  const auto n_val = static_cast<std::size_t>(std::llround(ratio[1] * static_cast<double>(n)));
  const auto n_test = static_cast<std::size_t>(std::llround(ratio[2] * static_cast<double>(n)));
  const std::size_t n_train = n - n_val - n_test;

  SplitManifest manifest;
  manifest.seed = seed;
  manifest.ratio = ratio;
  for (std::size_t i = 0; i < n; ++i) {
    Split s = i < n_train ? Split::kTrain : (i < n_train + n_val ? Split::kVal : Split::kTest);
    manifest.assignment[compounds[i]] = s;
  }
  repair_containment(corpus, manifest);
  return manifest;
}

std::vector<core::InteractionRecord> interactions_in(const core::Corpus& corpus,
                                                     const SplitManifest& manifest, Split split) {
  std::vector<core::InteractionRecord> out;
  for (const auto& r : corpus.interactions) {
    auto it = manifest.assignment.find(r.compound_id);
    if (it != manifest.assignment.end() && it->second == split) out.push_back(r);
  }
  return out;
}

}  // namespace scope::balance
