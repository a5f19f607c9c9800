// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/core/corpus_io.hpp"

#include <fmt/format.h>

#include "scope/util/error.hpp"
#include "scope/util/hash.hpp"
#include "scope/util/text.hpp"

namespace scope::core {
namespace {

std::string resolve(const std::filesystem::path& dir, const std::string& p) {
  if (p.empty()) return p;
  std::filesystem::path path(p);
  if (path.is_absolute()) return p;
  return std::filesystem::absolute(dir / path).lexically_normal().string();
}

std::string relative_to(const std::filesystem::path& dir, const std::string& p) {
  std::filesystem::path path(p);
  if (p.empty() || !path.is_absolute()) return p;
  return path.lexically_proximate(std::filesystem::absolute(dir).lexically_normal()).string();
}

void check_header(const TsvTable& table, std::string_view expected, std::string_view what) {
  if (join(table.header, "\t") != expected) {
    throw ParseError(fmt::format("{}: unexpected header '{}'", what, join(table.header, "\t")));
  }
}

}  // namespace

std::string format_interactions(const std::vector<InteractionRecord>& records) {
  std::string out = kInteractionsHeader;
  out.push_back('\n');
  for (const auto& r : records) {
    const auto& m = r.measurement;
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\n", r.protein_id, r.compound_id,
                       static_cast<int>(r.label), r.source, m ? m->type : "",
                       m ? format_double(m->value) : "", m ? m->units : "");
  }
  return out;
}

std::string format_proteins(const std::map<std::string, ProteinRecord>& proteins) {
  std::string out = kProteinsHeader;
  out.push_back('\n');
  for (const auto& [id, p] : proteins) {
    out += fmt::format("{}\t{}\t{}\t{}\n", id, p.sequence, family_name(p.family), p.structure_path);
  }
  return out;
}

std::string format_compounds(const std::map<std::string, CompoundRecord>& compounds) {
  std::string out = kCompoundsHeader;
  out.push_back('\n');
  for (const auto& [id, c] : compounds) {
    out += fmt::format("{}\t{}\t{}\n", id, c.smiles, c.conformer_path.value_or(""));
  }
  return out;
}

std::vector<InteractionRecord> parse_interactions(std::string_view text) {
  TsvTable table = parse_tsv(text);
  check_header(table, kInteractionsHeader, kInteractionsFile);
  std::vector<InteractionRecord> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    InteractionRecord r;
    r.protein_id = row[0];
    r.compound_id = row[1];
    if (row[2] != "0" && row[2] != "1") {
      throw ParseError(fmt::format("{}:{}: label must be 0 or 1", kInteractionsFile,
                                   table.line_numbers[i]));
    }
    r.label = row[2] == "1" ? 1 : 0;
    r.source = row[3];
    if (!row[4].empty()) {
      auto value = parse_double(row[5]);
      if (!value) {
        throw ParseError(fmt::format("{}:{}: bad measurement value '{}'", kInteractionsFile,
                                     table.line_numbers[i], row[5]));
      }
      r.measurement = Measurement{row[4], *value, row[6]};
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::map<std::string, ProteinRecord> parse_proteins(std::string_view text) {
  TsvTable table = parse_tsv(text);
  check_header(table, kProteinsHeader, kProteinsFile);
  std::map<std::string, ProteinRecord> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    auto family = parse_family(row[2]);
    if (!family) {
      throw ParseError(fmt::format("{}:{}: unknown family '{}'", kProteinsFile,
                                   table.line_numbers[i], row[2]));
    }
    out[row[0]] = ProteinRecord{row[0], row[1], *family, row[3]};
  }
  return out;
}

std::map<std::string, CompoundRecord> parse_compounds(std::string_view text) {
  TsvTable table = parse_tsv(text);
  check_header(table, kCompoundsHeader, kCompoundsFile);
  std::map<std::string, CompoundRecord> out;
  for (const auto& row : table.rows) {
    CompoundRecord c{row[0], row[1], std::nullopt};
    if (!row[2].empty()) c.conformer_path = row[2];
    out[row[0]] = std::move(c);
  }
  return out;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / kInteractionsFile, format_interactions(corpus.interactions));
  auto proteins = corpus.proteins;
  for (auto& [_, p] : proteins) p.structure_path = relative_to(dir, p.structure_path);
  auto compounds = corpus.compounds;
  for (auto& [_, c] : compounds) {
    if (c.conformer_path) c.conformer_path = relative_to(dir, *c.conformer_path);
  }
  write_file(dir / kProteinsFile, format_proteins(proteins));
  write_file(dir / kCompoundsFile, format_compounds(compounds));
}

Corpus read_corpus(const std::filesystem::path& dir) {
  Corpus corpus;
  corpus.interactions = parse_interactions(read_file(dir / kInteractionsFile));
  corpus.proteins = parse_proteins(read_file(dir / kProteinsFile));
  corpus.compounds = parse_compounds(read_file(dir / kCompoundsFile));
  resolve_paths(corpus, dir);
  return corpus;
}

void resolve_paths(Corpus& corpus, const std::filesystem::path& dir) {
  for (auto& [_, p] : corpus.proteins) p.structure_path = resolve(dir, p.structure_path);
  for (auto& [_, c] : corpus.compounds) {
    if (c.conformer_path) c.conformer_path = resolve(dir, *c.conformer_path);
  }
}

std::string corpus_hash(const Corpus& corpus) {
  // File paths are excluded so the hash does not depend on where the corpus
  // directory lives.
  std::string canonical = format_interactions(corpus.interactions);
  for (const auto& [id, p] : corpus.proteins) {
    canonical += fmt::format("P\t{}\t{}\t{}\n", id, p.sequence, family_name(p.family));
  }
  for (const auto& [id, c] : corpus.compounds) canonical += fmt::format("C\t{}\t{}\n", id, c.smiles);
  return sha256_hex(canonical);
}

}  // namespace scope::core
