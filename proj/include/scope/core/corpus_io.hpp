// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "scope/core/types.hpp"

namespace scope::core {

// File names inside a corpus directory.
inline constexpr const char* kInteractionsFile = "interactions.tsv";
inline constexpr const char* kProteinsFile = "proteins.tsv";
inline constexpr const char* kCompoundsFile = "compounds.tsv";

inline constexpr const char* kInteractionsHeader =
    "protein_id\tcompound_id\tlabel\tsource\tmeasurement_type\tmeasurement_value\tmeasurement_units";
inline constexpr const char* kProteinsHeader = "protein_id\tsequence\tfamily\tstructure_path";
inline constexpr const char* kCompoundsHeader = "compound_id\tsmiles\tconformer_path";

std::string format_interactions(const std::vector<InteractionRecord>& records);
std::string format_proteins(const std::map<std::string, ProteinRecord>& proteins);
std::string format_compounds(const std::map<std::string, CompoundRecord>& compounds);

std::vector<InteractionRecord> parse_interactions(std::string_view text);
std::map<std::string, ProteinRecord> parse_proteins(std::string_view text);
std::map<std::string, CompoundRecord> parse_compounds(std::string_view text);

// Writes the three TSVs. Absolute structure/conformer paths are written
// relative to `dir` so a corpus can be moved along with its files; relative
// paths are written verbatim.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

// Reads a corpus directory. Relative structure/conformer paths are resolved
// against `dir` and made absolute.
Corpus read_corpus(const std::filesystem::path& dir);

// Makes relative structure/conformer paths absolute, anchored at `dir`.
void resolve_paths(Corpus& corpus, const std::filesystem::path& dir);

// SHA-256 over the canonical serialisation of the corpus.
std::string corpus_hash(const Corpus& corpus);

}  // namespace scope::core
