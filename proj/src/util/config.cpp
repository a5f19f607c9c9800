// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/util/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <sstream>

#include "scope/util/error.hpp"
#include "scope/util/text.hpp"

namespace scope {

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(fmt::format("config: {} (line {})", e.message(), e.line()));
  }
  KeyValueConfig config;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      config.data_[""][name] = std::string(trim(node.data()));
      continue;
    }
    auto& section = config.data_[name];
    for (const auto& [key, leaf] : node) section[key] = std::string(trim(leaf.data()));
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

std::vector<std::string> KeyValueConfig::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : data_) {
    if (!name.empty()) out.push_back(name);
  }
  return out;
}

bool KeyValueConfig::has_section(const std::string& section) const {
  return data_.contains(section);
}

std::optional<std::string> KeyValueConfig::get(const std::string& section,
                                               const std::string& key) const {
  auto s = data_.find(section);
  if (s == data_.end()) return std::nullopt;
  auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

std::string KeyValueConfig::get_or(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  return get(section, key).value_or(fallback);
}

double KeyValueConfig::get_double(const std::string& section, const std::string& key,
                                  double fallback) const {
  auto raw = get(section, key);
  if (!raw) return fallback;
  auto value = parse_double(*raw);
  if (!value) throw ParseError(fmt::format("config [{}] {}: not a number: '{}'", section, key, *raw));
  return *value;
}

long long KeyValueConfig::get_int(const std::string& section, const std::string& key,
                                  long long fallback) const {
  auto raw = get(section, key);
  if (!raw) return fallback;
  auto value = parse_int(*raw);
  if (!value) throw ParseError(fmt::format("config [{}] {}: not an integer: '{}'", section, key, *raw));
  return *value;
}

bool KeyValueConfig::get_bool(const std::string& section, const std::string& key,
                              bool fallback) const {
  auto raw = get(section, key);
  if (!raw) return fallback;
  std::string v = to_lower(*raw);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParseError(fmt::format("config [{}] {}: not a boolean: '{}'", section, key, *raw));
}

const std::map<std::string, std::string>& KeyValueConfig::section(const std::string& name) const {
  static const std::map<std::string, std::string> kEmpty;
  auto it = data_.find(name);
  return it == data_.end() ? kEmpty : it->second;
}

void KeyValueConfig::set(const std::string& section, const std::string& key,
                         const std::string& value) {
  data_[section][key] = value;
}

}  // namespace scope
