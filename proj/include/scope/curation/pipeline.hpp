// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "scope/core/types.hpp"
#include "scope/curation/label_rules.hpp"

namespace scope::curation {

struct SourceSummary {
  std::string source_name;
  std::size_t rows = 0;
  std::size_t skipped_rows = 0;
  std::size_t labeled = 0;
  std::size_t dropped_indeterminate = 0;
  std::size_t dropped_no_rule = 0;
  std::size_t dropped_unit_mismatch = 0;
};

struct CurationRun {
  core::Corpus corpus;
  std::vector<SourceSummary> sources;
  std::size_t dropped_unmapped = 0;
  std::size_t dropped_not_allowlisted = 0;
  std::size_t dropped_interactions = 0;

  std::string summary_tsv() const;
};

// Curates a sources directory:
//   proteins.tsv, compounds.tsv  registries in the corpus schema
//   aliases.tsv                  optional alias table (identity otherwise)
//   allowlist.txt                optional protein allowlist
//   <name>.schema.ini            one per source; data in `file` or <name>.tsv
// Sources are ingested concurrently; labelling, canonicalisation and the
// merge run afterwards in a fixed order.
CurationRun run_curation(const std::filesystem::path& sources_dir,
                         const std::vector<LabelRule>& rules);

}  // namespace scope::curation
