// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>

#include "scope/core/types.hpp"

namespace scope::balance {

enum class Split { kTrain, kVal, kTest };
std::string_view split_name(Split split);
Split parse_split(std::string_view name);

struct SplitManifest {
  std::uint64_t seed = 0;
  std::map<std::string, Split> assignment;  // compound_id -> split
  std::array<double, 3> ratio{0.7, 0.1, 0.2};
  std::size_t repaired_compounds = 0;  // moved to train for protein containment

  std::array<std::size_t, 3> counts() const;
  std::set<std::string> compounds_in(Split split) const;

  // `#seed=N` line, then TSV `compound_id	split` sorted by compound id.
  std::string to_tsv() const;
  static SplitManifest from_tsv(std::string_view text);
  void write(const std::filesystem::path& path) const;
  static SplitManifest read(const std::filesystem::path& path);

  friend bool operator==(const SplitManifest&, const SplitManifest&) = default;
};

// Proteins that have at least one interaction in `split`.
std::set<std::string> proteins_in(const core::Corpus& corpus, const SplitManifest& manifest,
                                  Split split);

// Greedy protein-containment repair: while some val/test protein is missing
// from train, move the val/test compound covering the most missing proteins
// (ties broken by smallest compound id) into train. Returns the number of
// compounds moved.
std::size_t repair_containment(const core::Corpus& corpus, SplitManifest& manifest);

// Semi-inductive compound split. Compounds (sorted by id) are shuffled with
// the seed and cut into val/test blocks of round(ratio * n), the remainder
// going to train, then containment is repaired. Throws InvalidArgument for
// fewer than 10 compounds or ratios that do not sum to one.
SplitManifest semi_inductive_split(const core::Corpus& corpus, std::uint64_t seed,
                                   std::array<double, 3> ratio = {0.7, 0.1, 0.2});

// Interactions whose compound is assigned to `split`.
std::vector<core::InteractionRecord> interactions_in(const core::Corpus& corpus,
                                                     const SplitManifest& manifest, Split split);

}  // namespace scope::balance
