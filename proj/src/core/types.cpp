// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/core/types.hpp"

#include <algorithm>
#include <tuple>

#include "scope/util/text.hpp"

namespace scope::core {

std::string_view family_name(ProteinFamily family) {
  switch (family) {
    case ProteinFamily::kGpcr: return "GPCR";
    case ProteinFamily::kKinase: return "Kinase";
    case ProteinFamily::kIonChannel: return "IonChannel";
    case ProteinFamily::kNuclearHormoneReceptor: return "NuclearHormoneReceptor";
    case ProteinFamily::kOther: return "Other";
  }
  return "Other";
}

std::optional<ProteinFamily> parse_family(std::string_view name) {
  const std::string lowered = to_lower(trim(name));
  for (ProteinFamily f : kAllFamilies) {
    if (to_lower(family_name(f)) == lowered) return f;
  }
  if (lowered.empty()) return ProteinFamily::kOther;
  return std::nullopt;
}

std::optional<int> residue_token(char code) {
  auto pos = kResidueAlphabet.find(code);
  if (pos != std::string_view::npos) return static_cast<int>(pos);
  switch (code) {
    case 'X':
    case 'B':
    case 'Z':
    case 'U':
      return kUnknownResidueToken;
    default:
      return std::nullopt;
  }
}

std::vector<int> tokenize_sequence(std::string_view sequence) {
  std::vector<int> tokens;
  tokens.reserve(sequence.size());
  for (char c : sequence) tokens.push_back(residue_token(c).value_or(kUnknownResidueToken));
  return tokens;
}

std::string truncate_sequence(std::string_view sequence, std::size_t max_length) {
  return std::string(sequence.substr(0, std::min(sequence.size(), max_length)));
}

void sort_interactions(std::vector<InteractionRecord>& records) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.protein_id, a.compound_id, a.source) <
           std::tie(b.protein_id, b.compound_id, b.source);
  });
}

}  // namespace scope::core
