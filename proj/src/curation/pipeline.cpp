// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/curation/pipeline.hpp"

#include <algorithm>
#include <future>

#include <fmt/format.h>

#include "scope/core/canonicalize.hpp"
#include "scope/core/corpus_io.hpp"
#include "scope/curation/curation.hpp"
#include "scope/util/config.hpp"
#include "scope/util/error.hpp"
#include "scope/util/text.hpp"

namespace scope::curation {

std::string CurationRun::summary_tsv() const {
  std::string out =
      "source\trows\tskipped\tlabeled\tindeterminate\tno_rule\tunit_mismatch\n";
  for (const auto& s : sources) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\n", s.source_name, s.rows, s.skipped_rows,
                       s.labeled, s.dropped_indeterminate, s.dropped_no_rule,
                       s.dropped_unit_mismatch);
  }
  return out;
}

CurationRun run_curation(const std::filesystem::path& sources_dir,
                         const std::vector<LabelRule>& rules) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(sources_dir)) {
    throw IoError(fmt::format("sources directory {} does not exist", sources_dir.string()));
  }
  std::vector<fs::path> schema_files;
  for (const auto& entry : fs::directory_iterator(sources_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 11 && name.ends_with(".schema.ini")) schema_files.push_back(entry.path());
  }
  std::sort(schema_files.begin(), schema_files.end());

  std::vector<std::future<SourceTable>> pending;
  std::vector<std::string> seen_names;
  for (const auto& schema_path : schema_files) {
    SchemaMap schema = SchemaMap::read(schema_path);
    if (std::find(seen_names.begin(), seen_names.end(), schema.source_name) != seen_names.end()) {
      throw InvalidArgument(fmt::format("duplicate source name '{}'", schema.source_name));
    }
    seen_names.push_back(schema.source_name);
    auto config = KeyValueConfig::load(schema_path);
    fs::path data = sources_dir / config.get_or("source", "file", schema.source_name + ".tsv");
    pending.push_back(std::async(std::launch::async, [data, schema] {
      return ingest_source(data, schema);
    }));
  }

  CurationRun run;
  core::Corpus raw;
  raw.proteins = core::parse_proteins(read_file(sources_dir / core::kProteinsFile));
  raw.compounds = core::parse_compounds(read_file(sources_dir / core::kCompoundsFile));
  core::resolve_paths(raw, sources_dir);
  for (auto& future : pending) {
    SourceTable table = future.get();
    LabelingResult labeled = apply_label_rules(table, rules);
    run.sources.push_back({table.source_name, table.rows.size() + table.skipped_rows,
                           table.skipped_rows, labeled.records.size(),
                           labeled.dropped_indeterminate, labeled.dropped_no_rule,
                           labeled.dropped_unit_mismatch});
    raw.interactions.insert(raw.interactions.end(), labeled.records.begin(),
                            labeled.records.end());
  }

  const fs::path alias_path = sources_dir / "aliases.tsv";
  const fs::path allow_path = sources_dir / "allowlist.txt";
  core::AliasTable aliases =
      fs::exists(alias_path) ? core::AliasTable::read(alias_path) : core::AliasTable::identity(raw);
  std::optional<std::set<std::string>> allowlist;
  if (fs::exists(allow_path)) allowlist = core::read_allowlist(allow_path);

  auto canonical = core::canonicalize_ids(raw, aliases, allowlist);
  run.dropped_unmapped = canonical.dropped_proteins + canonical.dropped_compounds;
  run.dropped_not_allowlisted = canonical.filtered_proteins;
  run.dropped_interactions = canonical.dropped_interactions;

  run.corpus = merge_sources(canonical.corpus.interactions);
  run.corpus.proteins = std::move(canonical.corpus.proteins);
  run.corpus.compounds = std::move(canonical.corpus.compounds);
  return run;
}

}  // namespace scope::curation
