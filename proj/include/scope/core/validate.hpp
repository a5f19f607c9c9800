// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "scope/core/types.hpp"

namespace scope::core {

enum class IssueKind {
  kDanglingProtein,
  kDanglingCompound,
  kDuplicatePair,
  kAlphabetViolation,
  kEmptySequence,
  kBadLabel,
};

std::string_view issue_kind_name(IssueKind kind);

struct ValidationIssue {
  IssueKind kind;
  std::string subject;  // offending id or "protein|compound" pair
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  std::size_t count(IssueKind kind) const;
};

// Report-only scan. A duplicate issue is raised once per (protein, compound)
// pair that has more than one record.
ValidationReport validate_corpus(const Corpus& corpus);

}  // namespace scope::core
