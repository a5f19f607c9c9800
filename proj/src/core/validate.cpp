// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/core/validate.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

namespace scope::core {

std::string_view issue_kind_name(IssueKind kind) {
  switch (kind) {
    case IssueKind::kDanglingProtein: return "dangling_protein";
    case IssueKind::kDanglingCompound: return "dangling_compound";
    case IssueKind::kDuplicatePair: return "duplicate_pair";
    case IssueKind::kAlphabetViolation: return "alphabet_violation";
    case IssueKind::kEmptySequence: return "empty_sequence";
    case IssueKind::kBadLabel: return "bad_label";
  }
  return "unknown";
}

std::size_t ValidationReport::count(IssueKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      issues.begin(), issues.end(), [kind](const auto& issue) { return issue.kind == kind; }));
}

ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  for (const auto& [id, protein] : corpus.proteins) {
    if (protein.sequence.empty()) {
      report.issues.push_back({IssueKind::kEmptySequence, id, "sequence is empty"});
    }
    for (std::size_t i = 0; i < protein.sequence.size(); ++i) {
      if (!residue_token(protein.sequence[i])) {
        report.issues.push_back({IssueKind::kAlphabetViolation, id,
                                 fmt::format("position {}: '{}'", i, protein.sequence[i])});
        break;
      }
    }
  }

  std::map<std::pair<std::string, std::string>, std::size_t> pair_counts;
  for (const auto& r : corpus.interactions) {
    if (!corpus.proteins.contains(r.protein_id)) {
      report.issues.push_back({IssueKind::kDanglingProtein, r.protein_id,
                               fmt::format("referenced by compound {}", r.compound_id)});
    }
    if (!corpus.compounds.contains(r.compound_id)) {
      report.issues.push_back({IssueKind::kDanglingCompound, r.compound_id,
                               fmt::format("referenced by protein {}", r.protein_id)});
    }
    if (r.label > 1) {
      report.issues.push_back({IssueKind::kBadLabel, r.protein_id + "|" + r.compound_id,
                               fmt::format("label {}", static_cast<int>(r.label))});
    }
    ++pair_counts[{r.protein_id, r.compound_id}];
  }
  for (const auto& [pair, n] : pair_counts) {
    if (n > 1) {
      report.issues.push_back({IssueKind::kDuplicatePair, pair.first + "|" + pair.second,
                               fmt::format("{} records", n)});
    }
  }
  return report;
}

}  // namespace scope::core
