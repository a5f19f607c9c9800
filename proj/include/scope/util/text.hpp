// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scope {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

std::vector<std::string> split(std::string_view text, char delim);
std::string_view trim(std::string_view text);
std::string to_upper(std::string_view text);
std::string to_lower(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

// Shortest round-trippable decimal form of a double.
std::string format_double(double value);

// Tab-separated table with a header row. Lines beginning with '#' and blank
// lines are ignored on read.
struct TsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // Line number (1-based) in the source file for each row.
  std::vector<std::size_t> line_numbers;

  // Index of a header column, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
  std::size_t require_column(std::string_view name) const;
};

TsvTable parse_tsv(std::string_view text);
TsvTable read_tsv(const std::filesystem::path& path);
std::string format_tsv(const TsvTable& table);

}  // namespace scope
