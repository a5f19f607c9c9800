// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scope::chem {

// Element symbol for an atomic number (0 is the "*" wildcard).
std::string_view element_symbol(int atomic_number);
// Atomic number for a case-sensitive element symbol, or nullopt.
std::optional<int> atomic_number(std::string_view symbol);

enum class BondOrder { kSingle = 1, kDouble = 2, kTriple = 3, kAromatic = 4 };

enum class Hybridization { kUnspecified, kSp, kSp2, kSp3, kSp3d, kSp3d2 };

struct Atom {
  int atomic_number = 6;
  int formal_charge = 0;
  int isotope = 0;
  // Hydrogens attached through the input (bracket H count or explicit H
  // atoms). Implicit hydrogens are derived from valence.
  int explicit_h = 0;
  int implicit_h = 0;
  int radical_electrons = 0;
  bool aromatic = false;
  bool bracket = false;  // bracket atoms never receive implicit hydrogens
  Hybridization hybridization = Hybridization::kUnspecified;

  int total_h() const { return explicit_h + implicit_h; }
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::kSingle;

  int other(int atom) const { return atom == begin ? end : begin; }
};

// Heavy-atom molecular graph. Hydrogens are carried as counts on their
// parent atom.
class Molecule {
 public:
  int add_atom(const Atom& atom);
  int add_bond(int a, int b, BondOrder order);

  std::size_t num_atoms() const { return atoms_.size(); }
  std::size_t num_bonds() const { return bonds_.size(); }
  const Atom& atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  Atom& atom(int i) { return atoms_[static_cast<std::size_t>(i)]; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  Bond& bond(int i) { return bonds_[static_cast<std::size_t>(i)]; }
  // Bond indices incident on an atom.
  const std::vector<int>& incident(int atom) const {
    return adjacency_[static_cast<std::size_t>(atom)];
  }
  int degree(int atom) const { return static_cast<int>(incident(atom).size()); }
  std::optional<int> find_bond(int a, int b) const;

  // Derived properties, in dependency order: implicit hydrogens and
  // radicals from valence rules, Kekulé-ring aromaticity, then
  // hybridization. Parsers call this once after building the graph.
  void perceive();

  // Smallest rings found by removing each bond and searching the shortest
  // path between its ends (atom index lists).
  std::vector<std::vector<int>> rings() const;
  std::vector<bool> ring_atoms() const;

  // Atoms reordered so that `order[k]` becomes atom k.
  Molecule permuted(const std::vector<int>& order) const;

 private:
  void assign_implicit_hydrogens();
  void perceive_aromaticity();
  void assign_hybridization();

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<int>> adjacency_;
};

// Canonical atom ranks from iterated neighbourhood refinement with
// deterministic tie breaking. Graph-isomorphic inputs yield rank vectors
// that induce identical labelled graphs. Within a symmetry class the atom
// preferred by `tie_less` is split off first; without it the lowest input
// index wins, so symmetric atoms then follow input order.
std::vector<int> canonical_ranks(const Molecule& mol, const std::function<bool(int, int)>& tie_less = {});

// Atom indices sorted by canonical rank.
std::vector<int> canonical_order(const Molecule& mol, const std::function<bool(int, int)>& tie_less = {});

}  // namespace scope::chem
