// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scope::core {

// Pharmacological target family.
enum class ProteinFamily { kGpcr, kKinase, kIonChannel, kNuclearHormoneReceptor, kOther };

std::string_view family_name(ProteinFamily family);
// Accepts the canonical names ("GPCR", "Kinase", "IonChannel",
// "NuclearHormoneReceptor", "Other"), case-insensitively.
std::optional<ProteinFamily> parse_family(std::string_view name);
inline constexpr std::array<ProteinFamily, 5> kAllFamilies = {
    ProteinFamily::kGpcr, ProteinFamily::kKinase, ProteinFamily::kIonChannel,
    ProteinFamily::kNuclearHormoneReceptor, ProteinFamily::kOther};

// 20 standard residues in token order; token 20 is "unknown" (X, B, Z, U).
inline constexpr std::string_view kResidueAlphabet = "ACDEFGHIKLMNPQRSTVWY";
inline constexpr int kNumResidueTokens = 21;
inline constexpr int kUnknownResidueToken = 20;
inline constexpr std::size_t kDefaultMaxSequenceLength = 2000;

// Token for a one-letter residue code, or nullopt for characters that are
// neither standard nor one of the recognised non-standard codes.
std::optional<int> residue_token(char code);
std::vector<int> tokenize_sequence(std::string_view sequence);
std::string truncate_sequence(std::string_view sequence,
                              std::size_t max_length = kDefaultMaxSequenceLength);

struct ProteinRecord {
  std::string protein_id;
  std::string sequence;
  ProteinFamily family = ProteinFamily::kOther;
  std::string structure_path;

  friend bool operator==(const ProteinRecord&, const ProteinRecord&) = default;
};

struct CompoundRecord {
  std::string compound_id;
  std::string smiles;
  std::optional<std::string> conformer_path;

  friend bool operator==(const CompoundRecord&, const CompoundRecord&) = default;
};

struct Measurement {
  std::string type;  // e.g. IC50, Ki, Kd, EC50, PERCENT_ACTIVITY
  double value = 0.0;
  std::string units;

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

struct InteractionRecord {
  std::string protein_id;
  std::string compound_id;
  std::uint8_t label = 0;
  // Provenance tag; after merging, a comma-joined sorted list of sources.
  std::string source;
  std::optional<Measurement> measurement;

  friend bool operator==(const InteractionRecord&, const InteractionRecord&) = default;
};

struct Corpus {
  std::map<std::string, ProteinRecord> proteins;
  std::map<std::string, CompoundRecord> compounds;
  std::vector<InteractionRecord> interactions;

  bool empty() const { return proteins.empty() && compounds.empty() && interactions.empty(); }

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// Canonical interaction order: (protein_id, compound_id, source).
void sort_interactions(std::vector<InteractionRecord>& records);

}  // namespace scope::core
