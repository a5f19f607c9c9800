// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scope/core/types.hpp"
#include "scope/curation/label_rules.hpp"

namespace scope::curation {

// Column names in a source file. Either `label` or `measurement_value` must
// be named. The measurement type and units may come from a column or be
// fixed for the whole file.
struct SchemaMap {
  std::string source_name;
  std::string protein_column;
  std::string compound_column;
  std::optional<std::string> label_column;
  std::optional<std::string> measurement_type_column;
  std::optional<std::string> measurement_type;  // fixed type
  std::optional<std::string> measurement_value_column;
  std::optional<std::string> measurement_units_column;
  std::optional<std::string> measurement_units;  // fixed units

  // INI with a single [source] section using keys name, protein, compound,
  // label, measurement_type, measurement_type_column, measurement_value,
  // measurement_units, measurement_units_column.
  static SchemaMap parse(const std::string& text);
  static SchemaMap read(const std::filesystem::path& path);
};

struct RawRow {
  std::string protein_ref;
  std::string compound_ref;
  std::optional<std::uint8_t> label;
  std::optional<core::Measurement> measurement;
};

struct SourceTable {
  std::string source_name;
  std::vector<RawRow> rows;
  std::size_t skipped_rows = 0;
};

// Parses a tab-separated source file. Rows with missing ids, a label outside
// {0,1}, or an unparseable measurement are skipped and counted. Throws
// IoError for an unreadable file and InvalidArgument when the schema names a
// column absent from the header or names neither a label nor a measurement.
SourceTable ingest_source(const std::filesystem::path& path, const SchemaMap& schema);
SourceTable ingest_source_text(std::string_view text, const SchemaMap& schema);

struct LabelingResult {
  std::vector<core::InteractionRecord> records;
  std::size_t dropped_indeterminate = 0;
  std::size_t dropped_no_rule = 0;
  std::size_t dropped_unit_mismatch = 0;
};

// Precomputed labels pass through; measurements are classified by the rule
// for their (upper-cased) type.
LabelingResult apply_label_rules(const SourceTable& table, const std::vector<LabelRule>& rules);

// Conservative multi-source merge. Rows from one source for the same pair
// first collapse by majority label (ties negative); across sources a pair is
// positive only if every source says positive. Output has one record per
// pair, sorted, with provenance set to the sorted comma-joined source list.
// Registries in the returned corpus are empty.
core::Corpus merge_sources(const std::vector<core::InteractionRecord>& records);

struct StatsReport {
  std::size_t n_compounds = 0;
  std::size_t n_targets = 0;
  std::size_t n_interactions = 0;
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
  std::map<core::ProteinFamily, std::size_t> targets_by_family;

  // TSV `metric	value`, one row per count, families prefixed "family:".
  std::string to_tsv() const;
};

// Unique compounds and targets are counted over registries and interaction
// references combined.
StatsReport corpus_stats(const core::Corpus& corpus);

}  // namespace scope::curation
