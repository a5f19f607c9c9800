// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "scope/core/types.hpp"

namespace scope::core {

enum class IdKind { kProtein, kCompound };

// Maps source-local identifiers to canonical accessions. Canonical ids map to
// themselves implicitly, which makes canonicalisation idempotent.
class AliasTable {
 public:
  // Throws InvalidArgument when `local` is already bound to a different
  // canonical id.
  void add(IdKind kind, const std::string& local, const std::string& canonical);

  std::optional<std::string> lookup(IdKind kind, const std::string& id) const;

  // Every id present in the corpus maps to itself.
  static AliasTable identity(const Corpus& corpus);

  // TSV with header `kind	local_id	canonical_id`; kind is "protein" or
  // "compound".
  static AliasTable read(const std::filesystem::path& path);

 private:
  std::map<std::string, std::string>& table(IdKind kind) {
    return kind == IdKind::kProtein ? proteins_ : compounds_;
  }
  const std::map<std::string, std::string>& table(IdKind kind) const {
    return kind == IdKind::kProtein ? proteins_ : compounds_;
  }
  const std::set<std::string>& targets(IdKind kind) const {
    return kind == IdKind::kProtein ? protein_targets_ : compound_targets_;
  }

  std::map<std::string, std::string> proteins_;
  std::map<std::string, std::string> compounds_;
  std::set<std::string> protein_targets_;
  std::set<std::string> compound_targets_;
};

struct CanonicalizeResult {
  Corpus corpus;
  std::size_t dropped_proteins = 0;      // no alias mapping
  std::size_t dropped_compounds = 0;     // no alias mapping
  std::size_t filtered_proteins = 0;     // not on the species allowlist
  std::size_t dropped_interactions = 0;  // referenced a dropped entity
};

// Rewrites every id through `aliases`. Entities without a mapping are dropped
// and counted, as are interactions that reference them. When `allowlist` is
// given, proteins whose canonical id is absent from it are removed as well.
// When two local records collapse onto one canonical id the record with the
// smallest local id wins.
CanonicalizeResult canonicalize_ids(const Corpus& corpus, const AliasTable& aliases,
                                    const std::optional<std::set<std::string>>& allowlist = {});

// One accession per line; '#' comments allowed.
std::set<std::string> read_allowlist(const std::filesystem::path& path);

}  // namespace scope::core
