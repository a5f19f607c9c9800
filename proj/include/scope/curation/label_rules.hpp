// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scope/core/types.hpp"

namespace scope::curation {

enum class Direction { kLowerIsActive, kHigherIsActive };

// A threshold with its unit. Concentration units are normalised to molar;
// other units ("%", "") are compared verbatim.
struct Cutoff {
  double value = 0.0;
  std::string units;
};

// Concentration unit scale relative to molar (M, mM, uM/µM, nM, pM, fM), or
// nullopt for non-concentration units.
std::optional<double> molar_scale(std::string_view units);

// Value expressed in the canonical unit of its family (molar for
// concentrations, unchanged otherwise) together with that unit's family key.
struct NormalizedValue {
  double value;
  std::string unit_family;  // "M" for concentrations, otherwise the raw unit
};
NormalizedValue normalize_units(double value, std::string_view units);

struct LabelRule {
  std::string measurement_type;  // upper-cased, e.g. "IC50"
  Cutoff positive_cutoff;
  Cutoff negative_cutoff;
  Direction direction = Direction::kLowerIsActive;

  // Throws InvalidArgument when the positive and negative bands overlap or
  // the two cutoffs use incompatible units.
  void validate() const;

  enum class Outcome { kPositive, kNegative, kIndeterminate, kUnitMismatch };
  Outcome classify(double value, std::string_view units) const;
};

// Placeholder rules used only when no rule file is supplied: IC50, Ki, Kd and
// EC50 positive at <= 1 uM and negative at >= 10 uM.
std::vector<LabelRule> default_label_rules();

// One INI section per measurement type:
//   [IC50]
//   direction = lower_is_active
//   positive_cutoff = 1 uM
//   negative_cutoff = 10 uM
std::vector<LabelRule> parse_label_rules(const std::string& text);
std::vector<LabelRule> read_label_rules(const std::filesystem::path& path);

}  // namespace scope::curation
