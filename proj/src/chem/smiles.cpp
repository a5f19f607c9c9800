// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/chem/smiles.hpp"

#include <algorithm>

#include <cctype>
#include <map>
#include <optional>
#include <vector>

#include <fmt/format.h>

namespace scope::chem {

SmilesError::SmilesError(const std::string& message, std::size_t position)
    : ParseError(fmt::format("invalid SMILES at position {}: {}", position, message)),
      position_(position) {}

namespace {

struct PendingRing {
  int atom;
  std::optional<BondOrder> order;
  std::size_t position;
};

class SmilesParser {
 public:
  explicit SmilesParser(std::string_view text) : text_(text) {}

  Molecule parse() {
    if (text_.empty()) throw SmilesError("empty string", 0);
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '(') {
        if (prev_ < 0) throw SmilesError("branch without a preceding atom", pos_);
        stack_.push_back(prev_);
        ++pos_;
      } else if (c == ')') {
        if (stack_.empty()) throw SmilesError("unmatched ')'", pos_);
        if (pending_bond_) throw SmilesError("bond symbol before ')'", pos_);
        prev_ = stack_.back();
        stack_.pop_back();
        ++pos_;
      } else if (c == '.') {
        if (pending_bond_) throw SmilesError("bond symbol before '.'", pos_);
        prev_ = -1;
        ++pos_;
      } else if (is_bond_char(c)) {
        if (pending_bond_) throw SmilesError("two consecutive bond symbols", pos_);
        if (prev_ < 0) throw SmilesError("bond symbol without a preceding atom", pos_);
        pending_bond_ = bond_from_char(c);
        ++pos_;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        ring_closure();
      } else {
        std::size_t start = pos_;
        int idx = parse_atom();
        if (prev_ >= 0) connect(prev_, idx, pending_bond_, start);
        pending_bond_.reset();
        prev_ = idx;
      }
    }
    if (!stack_.empty()) throw SmilesError("unclosed '('", text_.size());
    if (pending_bond_) throw SmilesError("dangling bond symbol", text_.size());
    if (!rings_.empty()) {
      throw SmilesError(fmt::format("unclosed ring bond {}", rings_.begin()->first),
                        rings_.begin()->second.position);
    }
    return finish();
  }

 private:
  static bool is_bond_char(char c) {
    return c == '-' || c == '=' || c == '#' || c == ':' || c == '/' || c == '\\' || c == '$';
  }

  std::optional<BondOrder> bond_from_char(char c) {
    switch (c) {
      case '=': return BondOrder::kDouble;
      case '#': return BondOrder::kTriple;
      case ':': return BondOrder::kAromatic;
      case '$': throw SmilesError("quadruple bonds are not supported", pos_);
      default: return BondOrder::kSingle;
    }
  }

  void connect(int a, int b, std::optional<BondOrder> order, std::size_t position) {
    BondOrder o = order.value_or(is_aromatic_[static_cast<std::size_t>(a)] &&
                                         is_aromatic_[static_cast<std::size_t>(b)]
                                     ? BondOrder::kAromatic
                                     : BondOrder::kSingle);
    try {
      mol_.add_bond(a, b, o);
    } catch (const ParseError& e) {
      throw SmilesError(e.what(), position);
    }
  }

  void ring_closure() {
    if (prev_ < 0) throw SmilesError("ring bond without a preceding atom", pos_);
    std::size_t start = pos_;
    int number = 0;
    if (text_[pos_] == '%') {
      if (pos_ + 2 >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
        throw SmilesError("'%' must be followed by two digits", pos_);
      }
      number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      number = text_[pos_] - '0';
      ++pos_;
    }
    auto it = rings_.find(number);
    if (it == rings_.end()) {
      rings_[number] = {prev_, pending_bond_, start};
    } else {
      auto order = pending_bond_ ? pending_bond_ : it->second.order;
      if (pending_bond_ && it->second.order && *pending_bond_ != *it->second.order) {
        throw SmilesError("conflicting ring bond orders", start);
      }
      if (it->second.atom == prev_) throw SmilesError("ring bond to the same atom", start);
      connect(it->second.atom, prev_, order, start);
      rings_.erase(it);
    }
    pending_bond_.reset();
  }

  int add(Atom atom, bool aromatic) {
    atom.aromatic = aromatic;
    is_aromatic_.push_back(aromatic);
    return mol_.add_atom(atom);
  }

  int parse_atom() {
    char c = text_[pos_];
    if (c == '[') return parse_bracket();
    if (c == '*') {
      ++pos_;
      Atom a;
      a.atomic_number = 0;
      return add(a, false);
    }
    // Organic subset.
    static const std::map<std::string, int, std::less<>> kOrganic = {
        {"B", 5}, {"C", 6}, {"N", 7}, {"O", 8}, {"P", 15}, {"S", 16},
        {"F", 9}, {"Cl", 17}, {"Br", 35}, {"I", 53}};
    static const std::map<std::string, int, std::less<>> kAromatic = {
        {"b", 5}, {"c", 6}, {"n", 7}, {"o", 8}, {"p", 15}, {"s", 16}};
    if (pos_ + 1 < text_.size()) {
      auto two = text_.substr(pos_, 2);
      if (auto it = kOrganic.find(two); it != kOrganic.end()) {
        pos_ += 2;
        Atom a;
        a.atomic_number = it->second;
        return add(a, false);
      }
    }
    auto one = text_.substr(pos_, 1);
    if (auto it = kOrganic.find(one); it != kOrganic.end()) {
      ++pos_;
      Atom a;
      a.atomic_number = it->second;
      return add(a, false);
    }
    if (auto it = kAromatic.find(one); it != kAromatic.end()) {
      ++pos_;
      Atom a;
      a.atomic_number = it->second;
      return add(a, true);
    }
    throw SmilesError(fmt::format("unexpected character '{}'", c), pos_);
  }

  int parse_bracket() {
    const std::size_t open = pos_;
    ++pos_;  // '['
    auto peek = [&]() -> char { return pos_ < text_.size() ? text_[pos_] : '\0'; };
    Atom atom;
    atom.bracket = true;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      atom.isotope = atom.isotope * 10 + (peek() - '0');
      ++pos_;
    }
    // Element symbol: aromatic lowercase forms first.
    bool aromatic = false;
    std::optional<int> z;
    static const std::map<std::string, int, std::less<>> kAromaticBracket = {
        {"se", 34}, {"as", 33}, {"te", 52}, {"b", 5}, {"c", 6}, {"n", 7},
        {"o", 8},   {"p", 15},  {"s", 16}};
    if (peek() == '*') {
      z = 0;
      ++pos_;
    } else if (std::islower(static_cast<unsigned char>(peek()))) {
      for (std::size_t len : {2u, 1u}) {
        if (pos_ + len > text_.size()) continue;
        auto it = kAromaticBracket.find(text_.substr(pos_, len));
        if (it != kAromaticBracket.end()) {
          z = it->second;
          aromatic = true;
          pos_ += len;
          break;
        }
      }
    } else if (std::isupper(static_cast<unsigned char>(peek()))) {
      if (pos_ + 1 < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
        z = atomic_number(text_.substr(pos_, 2));
        if (z) pos_ += 2;
      }
      if (!z) {
        z = atomic_number(text_.substr(pos_, 1));
        if (z) ++pos_;
      }
    }
    if (!z) throw SmilesError("unknown element in bracket atom", pos_);
    atom.atomic_number = *z;

    // Chirality.
    if (peek() == '@') {
      ++pos_;
      if (peek() == '@') {
        ++pos_;
      } else {
        while (std::isupper(static_cast<unsigned char>(peek())) && peek() != 'H') ++pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
    }
    // Hydrogen count.
    if (peek() == 'H') {
      ++pos_;
      int count = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        count = peek() - '0';
        ++pos_;
      }
      atom.explicit_h = count;
    }
    // Charge.
    if (peek() == '+' || peek() == '-') {
      const int sign = peek() == '+' ? 1 : -1;
      const char sym = peek();
      ++pos_;
      int magnitude = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        magnitude = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          magnitude = magnitude * 10 + (peek() - '0');
          ++pos_;
        }
      } else {
        while (peek() == sym) {
          ++magnitude;
          ++pos_;
        }
      }
      atom.formal_charge = sign * magnitude;
    }
    // Atom class.
    if (peek() == ':') {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        throw SmilesError("atom class must be numeric", pos_);
      }
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    if (peek() != ']') throw SmilesError("unterminated bracket atom", open);
    ++pos_;
    return add(atom, aromatic);
  }

  Molecule finish() {
    // Fold explicit hydrogen atoms into their heavy neighbour.
    const std::size_t n = mol_.num_atoms();
    std::vector<bool> is_h(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      const Atom& a = mol_.atom(static_cast<int>(i));
      is_h[i] = a.atomic_number == 1 && a.isotope == 0 && a.formal_charge == 0 &&
                mol_.degree(static_cast<int>(i)) == 1 &&
                mol_.atom(mol_.bonds()[static_cast<std::size_t>(mol_.incident(static_cast<int>(i)).front())]
                              .other(static_cast<int>(i)))
                        .atomic_number != 1;
    }
    std::vector<int> new_index(n, -1);
    Molecule out;
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_h[i]) new_index[i] = out.add_atom(mol_.atom(static_cast<int>(i)));
    }
    if (std::none_of(out.atoms().begin(), out.atoms().end(), [](const Atom& a) { return a.atomic_number > 1; })) {
      throw SmilesError("molecule has no heavy atoms", 0);
    }
    for (const Bond& b : mol_.bonds()) {
      const bool hb = is_h[static_cast<std::size_t>(b.begin)];
      const bool he = is_h[static_cast<std::size_t>(b.end)];
      if (hb || he) {
        int heavy = hb ? b.end : b.begin;
        out.atom(new_index[static_cast<std::size_t>(heavy)]).explicit_h += 1;
        continue;
      }
      out.add_bond(new_index[static_cast<std::size_t>(b.begin)],
                   new_index[static_cast<std::size_t>(b.end)], b.order);
    }
    out.perceive();
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Molecule mol_;
  std::vector<bool> is_aromatic_;
  int prev_ = -1;
  std::optional<BondOrder> pending_bond_;
  std::vector<int> stack_;
  std::map<int, PendingRing> rings_;
};

}  // namespace

Molecule parse_smiles(std::string_view smiles) { return SmilesParser(smiles).parse(); }

bool is_valid_smiles(std::string_view smiles) {
  try {
    parse_smiles(smiles);
    return true;
  } catch (const SmilesError&) {
    return false;
  }
}

}  // namespace scope::chem
