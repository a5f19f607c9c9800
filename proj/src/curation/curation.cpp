// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/curation/curation.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "scope/util/config.hpp"
#include "scope/util/error.hpp"
#include "scope/util/text.hpp"

namespace scope::curation {

namespace {

std::optional<std::string> non_empty(const std::optional<std::string>& v) {
  if (v && !trim(*v).empty()) return std::string(trim(*v));
  return std::nullopt;
}

}  // namespace

SchemaMap SchemaMap::parse(const std::string& text) {
  auto config = KeyValueConfig::parse(text);
  const std::string s = "source";
  if (!config.has_section(s)) throw ParseError("schema: missing [source] section");
  SchemaMap schema;
  schema.source_name = config.get_or(s, "name", "");
  schema.protein_column = config.get_or(s, "protein", "");
  schema.compound_column = config.get_or(s, "compound", "");
  schema.label_column = non_empty(config.get(s, "label"));
  schema.measurement_type_column = non_empty(config.get(s, "measurement_type_column"));
  schema.measurement_type = non_empty(config.get(s, "measurement_type"));
  schema.measurement_value_column = non_empty(config.get(s, "measurement_value"));
  schema.measurement_units_column = non_empty(config.get(s, "measurement_units_column"));
  schema.measurement_units = non_empty(config.get(s, "measurement_units"));
  return schema;
}

SchemaMap SchemaMap::read(const std::filesystem::path& path) {
  SchemaMap schema = parse(read_file(path));
  if (schema.source_name.empty()) {
    // "chembl.schema.ini" -> "chembl"
    std::string stem = path.filename().string();
    schema.source_name = stem.substr(0, stem.find('.'));
  }
  return schema;
}

SourceTable ingest_source_text(std::string_view text, const SchemaMap& schema) {
  TsvTable tsv = parse_tsv(text);
  if (schema.protein_column.empty() || schema.compound_column.empty()) {
    throw InvalidArgument("schema must name the protein and compound columns");
  }
  if (!schema.label_column && !schema.measurement_value_column) {
    throw InvalidArgument("schema must name a label column or a measurement value column");
  }
  if (schema.measurement_value_column && !schema.measurement_type_column &&
      !schema.measurement_type) {
    throw InvalidArgument("schema names a measurement value but no measurement type");
  }
  auto col = [&](const std::string& name) {
    auto idx = tsv.column(name);
    if (!idx) {
      throw InvalidArgument(
          fmt::format("schema for '{}' references absent column '{}'", schema.source_name, name));
    }
    return *idx;
  };
  auto opt_col = [&](const std::optional<std::string>& name) -> std::optional<std::size_t> {
    if (!name) return std::nullopt;
    return col(*name);
  };
  const std::size_t protein_col = col(schema.protein_column);
  const std::size_t compound_col = col(schema.compound_column);
  const auto label_col = opt_col(schema.label_column);
  const auto type_col = opt_col(schema.measurement_type_column);
  const auto value_col = opt_col(schema.measurement_value_column);
  const auto units_col = opt_col(schema.measurement_units_column);

  SourceTable table;
  table.source_name = schema.source_name;
  for (const auto& row : tsv.rows) {
    RawRow raw;
    raw.protein_ref = std::string(trim(row[protein_col]));
    raw.compound_ref = std::string(trim(row[compound_col]));
    if (raw.protein_ref.empty() || raw.compound_ref.empty()) {
      ++table.skipped_rows;
      continue;
    }
    bool ok = true;
    if (label_col && !trim(row[*label_col]).empty()) {
      auto label = trim(row[*label_col]);
      if (label == "0" || label == "1") {
        raw.label = label == "1" ? 1 : 0;
      } else {
        ok = false;
      }
    } else if (value_col) {
      auto value = parse_double(trim(row[*value_col]));
      std::string type = type_col ? to_upper(trim(row[*type_col])) : to_upper(*schema.measurement_type);
      if (!value || type.empty()) {
        ok = false;
      } else {
        std::string units = units_col ? std::string(trim(row[*units_col]))
                                      : schema.measurement_units.value_or("");
        raw.measurement = core::Measurement{type, *value, units};
      }
    } else {
      ok = false;
    }
    if (!ok) {
      ++table.skipped_rows;
      continue;
    }
    table.rows.push_back(std::move(raw));
  }
  return table;
}

SourceTable ingest_source(const std::filesystem::path& path, const SchemaMap& schema) {
  return ingest_source_text(read_file(path), schema);
}

LabelingResult apply_label_rules(const SourceTable& table, const std::vector<LabelRule>& rules) {
  LabelingResult result;
  for (const auto& row : table.rows) {
    core::InteractionRecord record{row.protein_ref, row.compound_ref, 0, table.source_name,
                                   row.measurement};
    if (row.label) {
      record.label = *row.label;
      result.records.push_back(std::move(record));
      continue;
    }
    if (!row.measurement) {
      ++result.dropped_no_rule;
      continue;
    }
    const std::string type = to_upper(row.measurement->type);
    auto rule = std::find_if(rules.begin(), rules.end(),
                             [&](const LabelRule& r) { return to_upper(r.measurement_type) == type; });
    if (rule == rules.end()) {
      ++result.dropped_no_rule;
      continue;
    }
    switch (rule->classify(row.measurement->value, row.measurement->units)) {
      case LabelRule::Outcome::kPositive:
        record.label = 1;
        result.records.push_back(std::move(record));
        break;
      case LabelRule::Outcome::kNegative:
        record.label = 0;
        result.records.push_back(std::move(record));
        break;
      case LabelRule::Outcome::kIndeterminate:
        ++result.dropped_indeterminate;
        break;
      case LabelRule::Outcome::kUnitMismatch:
        ++result.dropped_unit_mismatch;
        break;
    }
  }
  return result;
}

core::Corpus merge_sources(const std::vector<core::InteractionRecord>& records) {
  struct Votes {
    std::size_t positive = 0;
    std::size_t negative = 0;
  };
  using Pair = std::pair<std::string, std::string>;
  // pair -> source -> votes; std::map makes the reduction order-independent.
  std::map<Pair, std::map<std::string, Votes>> grouped;
  std::map<Pair, std::vector<const core::InteractionRecord*>> members;
  for (const auto& r : records) {
    Pair key{r.protein_id, r.compound_id};
    auto& votes = grouped[key][r.source];
    (r.label == 1 ? votes.positive : votes.negative) += 1;
    members[key].push_back(&r);
  }

  core::Corpus corpus;
  corpus.interactions.reserve(grouped.size());
  for (const auto& [key, by_source] : grouped) {
    bool all_positive = true;
    std::vector<std::string> sources;
    for (const auto& [source, votes] : by_source) {
      sources.push_back(source);
      if (votes.positive <= votes.negative) all_positive = false;
    }
    core::InteractionRecord merged;
    merged.protein_id = key.first;
    merged.compound_id = key.second;
    merged.label = all_positive ? 1 : 0;
    merged.source = join(sources, ",");
    const auto& m = members[key];
    if (m.size() == 1) merged.measurement = m.front()->measurement;
    corpus.interactions.push_back(std::move(merged));
  }
  return corpus;
}

std::string StatsReport::to_tsv() const {
  std::string out = "metric\tvalue\n";
  out += fmt::format("compounds\t{}\n", n_compounds);
  out += fmt::format("targets\t{}\n", n_targets);
  out += fmt::format("interactions\t{}\n", n_interactions);
  out += fmt::format("positive\t{}\n", n_positive);
  out += fmt::format("negative\t{}\n", n_negative);
  for (core::ProteinFamily f : core::kAllFamilies) {
    auto it = targets_by_family.find(f);
    out += fmt::format("family:{}\t{}\n", core::family_name(f),
                       it == targets_by_family.end() ? 0 : it->second);
  }
  return out;
}

StatsReport corpus_stats(const core::Corpus& corpus) {
  StatsReport report;
  std::set<std::string> proteins;
  std::set<std::string> compounds;
  for (const auto& [id, p] : corpus.proteins) {
    proteins.insert(id);
    ++report.targets_by_family[p.family];
  }
  for (const auto& [id, _] : corpus.compounds) compounds.insert(id);
  for (const auto& r : corpus.interactions) {
    proteins.insert(r.protein_id);
    compounds.insert(r.compound_id);
    (r.label == 1 ? report.n_positive : report.n_negative) += 1;
  }
  report.n_targets = proteins.size();
  report.n_compounds = compounds.size();
  report.n_interactions = corpus.interactions.size();
  return report;
}

}  // namespace scope::curation
