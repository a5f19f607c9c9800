// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/core/canonicalize.hpp"

#include <fmt/format.h>

#include "scope/util/error.hpp"
#include "scope/util/text.hpp"

namespace scope::core {

void AliasTable::add(IdKind kind, const std::string& local, const std::string& canonical) {
  auto& map = table(kind);
  auto [it, inserted] = map.emplace(local, canonical);
  if (!inserted && it->second != canonical) {
    throw InvalidArgument(fmt::format("conflicting alias: '{}' maps to both '{}' and '{}'", local,
                                      it->second, canonical));
  }
  (kind == IdKind::kProtein ? protein_targets_ : compound_targets_).insert(canonical);
}

std::optional<std::string> AliasTable::lookup(IdKind kind, const std::string& id) const {
  const auto& map = table(kind);
  if (auto it = map.find(id); it != map.end()) return it->second;
  if (targets(kind).contains(id)) return id;
  return std::nullopt;
}

AliasTable AliasTable::identity(const Corpus& corpus) {
  AliasTable table;
  for (const auto& [id, _] : corpus.proteins) table.add(IdKind::kProtein, id, id);
  for (const auto& [id, _] : corpus.compounds) table.add(IdKind::kCompound, id, id);
  for (const auto& r : corpus.interactions) {
    table.add(IdKind::kProtein, r.protein_id, r.protein_id);
    table.add(IdKind::kCompound, r.compound_id, r.compound_id);
  }
  return table;
}

AliasTable AliasTable::read(const std::filesystem::path& path) {
  TsvTable tsv = read_tsv(path);
  const std::size_t kind_col = tsv.require_column("kind");
  const std::size_t local_col = tsv.require_column("local_id");
  const std::size_t canon_col = tsv.require_column("canonical_id");
  AliasTable table;
  for (std::size_t i = 0; i < tsv.rows.size(); ++i) {
    const auto& row = tsv.rows[i];
    const std::string kind = to_lower(row[kind_col]);
    IdKind k;
    if (kind == "protein") {
      k = IdKind::kProtein;
    } else if (kind == "compound") {
      k = IdKind::kCompound;
    } else {
      throw ParseError(fmt::format("{}:{}: unknown alias kind '{}'", path.string(),
                                   tsv.line_numbers[i], row[kind_col]));
    }
    table.add(k, row[local_col], row[canon_col]);
  }
  return table;
}

CanonicalizeResult canonicalize_ids(const Corpus& corpus, const AliasTable& aliases,
                                    const std::optional<std::set<std::string>>& allowlist) {
  CanonicalizeResult result;
  Corpus& out = result.corpus;

  // std::map iteration is ordered by local id, so the first emplace wins.
  for (const auto& [local, protein] : corpus.proteins) {
    auto canonical = aliases.lookup(IdKind::kProtein, local);
    if (!canonical) {
      ++result.dropped_proteins;
      continue;
    }
    if (allowlist && !allowlist->contains(*canonical)) {
      ++result.filtered_proteins;
      continue;
    }
    ProteinRecord p = protein;
    p.protein_id = *canonical;
    out.proteins.emplace(*canonical, std::move(p));
  }
  for (const auto& [local, compound] : corpus.compounds) {
    auto canonical = aliases.lookup(IdKind::kCompound, local);
    if (!canonical) {
      ++result.dropped_compounds;
      continue;
    }
    CompoundRecord c = compound;
    c.compound_id = *canonical;
    out.compounds.emplace(*canonical, std::move(c));
  }
  for (const auto& r : corpus.interactions) {
    auto protein = aliases.lookup(IdKind::kProtein, r.protein_id);
    auto compound = aliases.lookup(IdKind::kCompound, r.compound_id);
    if (!protein || !compound || !out.proteins.contains(*protein) ||
        !out.compounds.contains(*compound)) {
      ++result.dropped_interactions;
      continue;
    }
    InteractionRecord rec = r;
    rec.protein_id = *protein;
    rec.compound_id = *compound;
    out.interactions.push_back(std::move(rec));
  }
  return result;
}

std::set<std::string> read_allowlist(const std::filesystem::path& path) {
  std::set<std::string> out;
  for (const auto& line : split(read_file(path), '\n')) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace(t);
  }
  return out;
}

}  // namespace scope::core
