// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/curation/label_rules.hpp"

#include <cmath>

#include <fmt/format.h>

#include "scope/util/config.hpp"
#include "scope/util/error.hpp"
#include "scope/util/text.hpp"

namespace scope::curation {

std::optional<double> molar_scale(std::string_view units) {
  std::string u(trim(units));
  if (u == "M") return 1.0;
  if (u == "mM") return 1e-3;
  if (u == "uM" || u == "\xC2\xB5M" || u == "\xCE\xBCM" || u == "um") return 1e-6;
  if (u == "nM" || u == "nm") return 1e-9;
  if (u == "pM") return 1e-12;
  if (u == "fM") return 1e-15;
  return std::nullopt;
}

NormalizedValue normalize_units(double value, std::string_view units) {
  if (auto scale = molar_scale(units)) return {value * *scale, "M"};
  return {value, std::string(trim(units))};
}

void LabelRule::validate() const {
  auto pos = normalize_units(positive_cutoff.value, positive_cutoff.units);
  auto neg = normalize_units(negative_cutoff.value, negative_cutoff.units);
  if (pos.unit_family != neg.unit_family) {
    throw InvalidArgument(fmt::format("rule {}: cutoff units '{}' and '{}' are incompatible",
                                      measurement_type, positive_cutoff.units,
                                      negative_cutoff.units));
  }
  const bool disjoint = direction == Direction::kLowerIsActive ? pos.value < neg.value
                                                               : pos.value > neg.value;
  if (!disjoint) {
    throw InvalidArgument(
        fmt::format("rule {}: positive and negative bands overlap", measurement_type));
  }
}

LabelRule::Outcome LabelRule::classify(double value, std::string_view units) const {
  auto v = normalize_units(value, units);
  auto pos = normalize_units(positive_cutoff.value, positive_cutoff.units);
  auto neg = normalize_units(negative_cutoff.value, negative_cutoff.units);
  if (v.unit_family != pos.unit_family) return Outcome::kUnitMismatch;
  // Unit conversion is inexact (1000 nM vs 1 uM), so boundary values are
  // compared with a small relative tolerance.
  auto at_most = [](double a, double b) { return a <= b + 1e-9 * std::abs(b); };
  auto at_least = [](double a, double b) { return a >= b - 1e-9 * std::abs(b); };
  if (direction == Direction::kLowerIsActive) {
    if (at_most(v.value, pos.value)) return Outcome::kPositive;
    if (at_least(v.value, neg.value)) return Outcome::kNegative;
  } else {
    if (at_least(v.value, pos.value)) return Outcome::kPositive;
    if (at_most(v.value, neg.value)) return Outcome::kNegative;
  }
  return Outcome::kIndeterminate;
}

std::vector<LabelRule> default_label_rules() {
  std::vector<LabelRule> rules;
  for (const char* type : {"IC50", "KI", "KD", "EC50"}) {
    rules.push_back({type, {1.0, "uM"}, {10.0, "uM"}, Direction::kLowerIsActive});
  }
  return rules;
}

namespace {

Cutoff parse_cutoff(const std::string& section, const std::string& raw,
                    const std::string& units_override) {
  auto parts = split(std::string(trim(raw)), ' ');
  std::vector<std::string> tokens;
  for (auto& p : parts) {
    if (!trim(p).empty()) tokens.emplace_back(trim(p));
  }
  if (tokens.empty() || tokens.size() > 2) {
    throw ParseError(fmt::format("rule [{}]: bad cutoff '{}'", section, raw));
  }
  auto value = parse_double(tokens[0]);
  if (!value) throw ParseError(fmt::format("rule [{}]: bad cutoff value '{}'", section, raw));
  std::string units = tokens.size() == 2 ? tokens[1] : units_override;
  return {*value, units};
}

}  // namespace

std::vector<LabelRule> parse_label_rules(const std::string& text) {
  auto config = KeyValueConfig::parse(text);
  std::vector<LabelRule> rules;
  for (const auto& section : config.sections()) {
    LabelRule rule;
    rule.measurement_type = to_upper(section);
    const std::string dir = to_lower(config.get_or(section, "direction", "lower_is_active"));
    if (dir == "lower_is_active") {
      rule.direction = Direction::kLowerIsActive;
    } else if (dir == "higher_is_active") {
      rule.direction = Direction::kHigherIsActive;
    } else {
      throw ParseError(fmt::format("rule [{}]: unknown direction '{}'", section, dir));
    }
    auto pos = config.get(section, "positive_cutoff");
    auto neg = config.get(section, "negative_cutoff");
    if (!pos || !neg) {
      throw ParseError(fmt::format("rule [{}]: positive_cutoff and negative_cutoff are required",
                                   section));
    }
    rule.positive_cutoff = parse_cutoff(section, *pos, config.get_or(section, "positive_units", ""));
    rule.negative_cutoff = parse_cutoff(section, *neg, config.get_or(section, "negative_units", ""));
    rule.validate();
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<LabelRule> read_label_rules(const std::filesystem::path& path) {
  return parse_label_rules(read_file(path));
}

}  // namespace scope::curation
