// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>

#include "scope/core/corpus_io.hpp"
#include "scope/curation/curation.hpp"
#include "scope/curation/label_rules.hpp"
#include "scope/curation/pipeline.hpp"
#include "scope/util/error.hpp"
#include "test_util.hpp"

namespace scope::curation {
namespace {

using scope::testing::interaction;
using Outcome = LabelRule::Outcome;

LabelRule ic50_rule() {
  return LabelRule{"IC50", {1.0, "uM"}, {10.0, "uM"}, Direction::kLowerIsActive};
}

TEST(LabelRules, UnitScales) {
  EXPECT_DOUBLE_EQ(*molar_scale("nM"), 1e-9);
  EXPECT_DOUBLE_EQ(*molar_scale("µM"), 1e-6);
  EXPECT_DOUBLE_EQ(*molar_scale("uM"), 1e-6);
  EXPECT_FALSE(molar_scale("%").has_value());
  auto n = normalize_units(500.0, "nM");
  EXPECT_DOUBLE_EQ(n.value, 5e-7);
  EXPECT_EQ(n.unit_family, "M");
}

TEST(LabelRules, ExamplesFromCutoffArithmetic) {
  auto rule = ic50_rule();
  EXPECT_EQ(rule.classify(0.1, "µM"), Outcome::kPositive);
  EXPECT_EQ(rule.classify(5.0, "uM"), Outcome::kIndeterminate);
  EXPECT_EQ(rule.classify(10.0, "uM"), Outcome::kNegative);
  EXPECT_EQ(rule.classify(1000.0, "nM"), Outcome::kPositive);
  EXPECT_EQ(rule.classify(3.0, "%"), Outcome::kUnitMismatch);
}

TEST(LabelRules, HigherIsActive) {
  LabelRule r{"PERCENT_ACTIVITY", {50.0, "%"}, {20.0, "%"}, Direction::kHigherIsActive};
  r.validate();
  EXPECT_EQ(r.classify(80.0, "%"), Outcome::kPositive);
  EXPECT_EQ(r.classify(10.0, "%"), Outcome::kNegative);
  EXPECT_EQ(r.classify(30.0, "%"), Outcome::kIndeterminate);
}

TEST(LabelRules, OverlappingBandsRejected) {
  LabelRule r{"IC50", {10.0, "uM"}, {1.0, "uM"}, Direction::kLowerIsActive};
  EXPECT_THROW(r.validate(), InvalidArgument);
  LabelRule mixed{"IC50", {1.0, "uM"}, {10.0, "%"}, Direction::kLowerIsActive};
  EXPECT_THROW(mixed.validate(), InvalidArgument);
}

TEST(LabelRules, ParsesRuleFile) {
  auto rules = parse_label_rules(
      "[Ki]\npositive_cutoff = 100 nM\nnegative_cutoff = 1 uM\n\n"
      "[percent_activity]\ndirection = higher_is_active\npositive_cutoff = 50\npositive_units = %\n"
      "negative_cutoff = 20\nnegative_units = %\n");
  ASSERT_EQ(rules.size(), 2u);
  auto ki = std::find_if(rules.begin(), rules.end(), [](auto& r) { return r.measurement_type == "KI"; });
  ASSERT_NE(ki, rules.end());
  EXPECT_EQ(ki->classify(50, "nM"), Outcome::kPositive);
  EXPECT_EQ(ki->classify(0.5, "uM"), Outcome::kIndeterminate);
}

TEST(LabelRules, NeverLabelsInsideIndeterminateBand) {
  auto rule = ic50_rule();
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    double v = std::pow(10.0, rng.uniform(-3.0, 3.0));
    auto out = rule.classify(v, "uM");
    if (v > 1.0 && v < 10.0) EXPECT_EQ(out, Outcome::kIndeterminate) << v;
  }
}

SchemaMap measurement_schema() {
  return SchemaMap::parse(
      "[source]\nname = bindingdb\nprotein = target\ncompound = ligand\n"
      "measurement_type_column = type\nmeasurement_value = value\nmeasurement_units_column = units\n");
}

TEST(Ingest, EmptyFileWithHeader) {
  auto t = ingest_source_text("target\tligand\ttype\tvalue\tunits\n", measurement_schema());
  EXPECT_TRUE(t.rows.empty());
  EXPECT_EQ(t.skipped_rows, 0u);
  EXPECT_EQ(t.source_name, "bindingdb");
}

TEST(Ingest, SkipsUnparseableMeasurements) {
  std::string text = "target\tligand\ttype\tvalue\tunits\n";
  const std::vector<std::string> values = {"1.5", "20", "abc", "0.3", "", "7", "12", "0.01", "3e2", "44"};
  for (std::size_t i = 0; i < values.size(); ++i) {
    text += fmt::format("P{}\tC{}\tIC50\t{}\tuM\n", i, i, values[i]);
  }
  // Oracle: a row survives when its value column parses as a finite number.
  std::size_t expect_ok = 0;
  for (const auto& v : values) {
    char* end = nullptr;
    std::strtod(v.c_str(), &end);
    if (!v.empty() && *end == '\0') ++expect_ok;
  }
  auto t = ingest_source_text(text, measurement_schema());
  EXPECT_EQ(t.rows.size(), expect_ok);
  EXPECT_EQ(t.rows.size(), 8u);
  EXPECT_EQ(t.skipped_rows, 2u);
  EXPECT_EQ(t.rows[0].measurement->type, "IC50");
}

TEST(Ingest, SchemaReferencingAbsentLabelColumnIsError) {
  auto schema = SchemaMap::parse("[source]\nname = s\nprotein = target\ncompound = ligand\nlabel = active\n");
  EXPECT_THROW(ingest_source_text("target\tligand\nP1\tC1\n", schema), InvalidArgument);
}

TEST(Ingest, UnreadableFileIsError) {
  EXPECT_THROW(ingest_source("/nonexistent/source.tsv", measurement_schema()), IoError);
}

TEST(ApplyRules, PrecomputedLabelPassesThrough) {
  SourceTable t{"curated", {{"P1", "C1", 0, std::nullopt}}, 0};
  auto r = apply_label_rules(t, default_label_rules());
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].label, 0);
  EXPECT_EQ(r.records[0].source, "curated");
}

TEST(ApplyRules, CountsDroppedRows) {
  SourceTable t{"s",
                {{"P1", "C1", std::nullopt, core::Measurement{"IC50", 0.1, "uM"}},
                 {"P1", "C2", std::nullopt, core::Measurement{"IC50", 5.0, "uM"}},
                 {"P1", "C3", std::nullopt, core::Measurement{"LOGP", 2.0, ""}},
                 {"P1", "C4", std::nullopt, core::Measurement{"KI", 30.0, "uM"}}},
                0};
  auto r = apply_label_rules(t, default_label_rules());
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].label, 1);
  EXPECT_EQ(r.records[1].label, 0);
  EXPECT_EQ(r.dropped_indeterminate, 1u);
  EXPECT_EQ(r.dropped_no_rule, 1u);
}

std::uint8_t merged_label(const std::vector<int>& labels) {
  std::vector<core::InteractionRecord> rs;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    rs.push_back(interaction("P", "C", labels[i], fmt::format("s{}", i)));
  }
  auto c = merge_sources(rs);
  EXPECT_EQ(c.interactions.size(), 1u);
  return c.interactions.at(0).label;
}

TEST(Merge, ConservativeLabels) {
  EXPECT_EQ(merged_label({1, 1, 1}), 1);
  EXPECT_EQ(merged_label({1, 0}), 0);
  EXPECT_EQ(merged_label({0}), 0);
}

TEST(Merge, ProvenanceIsJoinedSourceList) {
  auto c = merge_sources({interaction("P", "C", 1, "zinc"), interaction("P", "C", 1, "chembl")});
  EXPECT_EQ(c.interactions[0].source, "chembl,zinc");
}

TEST(Merge, DuplicatesWithinSourceCollapseByMajorityTiesNegative) {
  auto c = merge_sources({interaction("P", "C", 1, "a"), interaction("P", "C", 1, "a"), interaction("P", "C", 0, "a")});
  EXPECT_EQ(c.interactions[0].label, 1);
  c = merge_sources({interaction("P", "C", 1, "a"), interaction("P", "C", 0, "a")});
  EXPECT_EQ(c.interactions[0].label, 0);
}

std::vector<core::InteractionRecord> random_records(Rng& rng, std::size_t n) {
  std::vector<core::InteractionRecord> rs;
  for (std::size_t i = 0; i < n; ++i) {
    rs.push_back(interaction(fmt::format("P{}", rng.uniform_index(3)), fmt::format("C{}", rng.uniform_index(4)),
                             static_cast<int>(rng.uniform_index(2)), fmt::format("s{}", rng.uniform_index(3))));
  }
  return rs;
}

TEST(Merge, OrderIndependent) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    auto rs = random_records(rng, 25);
    auto base = merge_sources(rs);
    rng.shuffle(std::span(rs));
    EXPECT_EQ(merge_sources(rs), base);
  }
}

TEST(Merge, AddingNegativeNeverYieldsPositive) {
  Rng rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    auto rs = random_records(rng, 15);
    auto before = merge_sources(rs);
    const auto& pick = before.interactions[rng.uniform_index(before.interactions.size())];
    rs.push_back(interaction(pick.protein_id, pick.compound_id, 0, "extra"));
    auto after = merge_sources(rs);
    for (const auto& r : after.interactions) {
      if (r.protein_id == pick.protein_id && r.compound_id == pick.compound_id) EXPECT_EQ(r.label, 0);
    }
  }
}

TEST(Stats, EmptyCorpusIsAllZero) {
  auto s = corpus_stats(core::Corpus{});
  EXPECT_EQ(s.n_compounds + s.n_targets + s.n_interactions + s.n_positive + s.n_negative, 0u);
}

TEST(Stats, FullyCrossedCorpus) {
  core::Corpus c;
  std::set<std::string> ps, cs;
  for (int p = 0; p < 2; ++p) {
    for (int k = 0; k < 3; ++k) {
      c.interactions.push_back(interaction(fmt::format("P{}", p), fmt::format("C{}", k), (p + k) % 2));
      ps.insert(fmt::format("P{}", p));
      cs.insert(fmt::format("C{}", k));
    }
  }
  auto s = corpus_stats(c);
  EXPECT_EQ(s.n_compounds, cs.size());
  EXPECT_EQ(s.n_targets, ps.size());
  EXPECT_EQ(s.n_interactions, ps.size() * cs.size());
  EXPECT_EQ(s.n_positive + s.n_negative, s.n_interactions);
}

TEST(Stats, FamilyBreakdown) {
  core::Corpus c;
  scope::testing::add_protein(c, "K", "MK", core::ProteinFamily::kKinase);
  scope::testing::add_protein(c, "G", "MK", core::ProteinFamily::kGpcr);
  auto s = corpus_stats(c);
  EXPECT_EQ(s.targets_by_family[core::ProteinFamily::kKinase], 1u);
  EXPECT_EQ(s.targets_by_family[core::ProteinFamily::kGpcr], 1u);
  EXPECT_NE(s.to_tsv().find("family:Kinase\t1"), std::string::npos);
}

TEST(Pipeline, CuratesTwoSources) {
  scope::testing::TempDir dir("curate");
  write_file(dir / "proteins.tsv",
             "protein_id\tsequence\tfamily\tstructure_path\negfr\tMKVL\tKinase\t\nadrb2\tMGQP\tGPCR\t\n"
             "mouse1\tMAAA\tOther\t\n");
  write_file(dir / "compounds.tsv", "compound_id\tsmiles\tconformer_path\nm1\tCCO\t\nm2\tc1ccccc1\t\n");
  write_file(dir / "assays.schema.ini",
             "[source]\nprotein = target\ncompound = ligand\nmeasurement_type = IC50\n"
             "measurement_value = value\nmeasurement_units = nM\n");
  write_file(dir / "assays.tsv", "target\tligand\tvalue\negfr\tm1\t50\negfr\tm2\t50000\nadrb2\tm1\t5000\n"
                                 "mouse1\tm1\t3\n");
  write_file(dir / "curated.schema.ini", "[source]\nprotein = uniprot\ncompound = cid\nlabel = y\n");
  write_file(dir / "curated.tsv", "uniprot\tcid\ty\negfr\tm1\t1\nadrb2\tm2\t1\n");
  write_file(dir / "aliases.tsv",
             "kind\tlocal_id\tcanonical_id\nprotein\tegfr\tP00533\nprotein\tadrb2\tP07550\nprotein\tmouse1\tQ00001\n"
             "compound\tm1\tCHEMBL1\ncompound\tm2\tCHEMBL2\n");
  write_file(dir / "allowlist.txt", "P00533\nP07550\n");

  auto run = run_curation(dir.path(), default_label_rules());
  ASSERT_EQ(run.sources.size(), 2u);
  EXPECT_EQ(run.sources[0].source_name, "assays");
  EXPECT_EQ(run.sources[0].dropped_indeterminate, 1u);
  EXPECT_EQ(run.dropped_not_allowlisted, 1u);
  ASSERT_EQ(run.corpus.interactions.size(), 3u);
  EXPECT_EQ(run.corpus.interactions[0].protein_id, "P00533");
  EXPECT_EQ(run.corpus.interactions[0].compound_id, "CHEMBL1");
  EXPECT_EQ(run.corpus.interactions[0].label, 1);
  EXPECT_EQ(run.corpus.interactions[0].source, "assays,curated");
  EXPECT_EQ(run.corpus.interactions[1].label, 0);
  EXPECT_TRUE(run.corpus.proteins.contains("P07550"));
  EXPECT_FALSE(run.corpus.proteins.contains("Q00001"));
}

}  // namespace
}  // namespace scope::curation
