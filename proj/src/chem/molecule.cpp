// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/chem/molecule.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "scope/util/error.hpp"

namespace scope::chem {
namespace {

constexpr std::array<std::string_view, 119> kSymbols = {
    "*",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si",
    "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu",
    "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru",
    "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",
    "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac",
    "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf",
    "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

// Allowed valences for main-group elements; empty for elements without a
// valence model (metals), which never receive implicit hydrogens.
std::vector<int> allowed_valences(int z) {
  switch (z) {
    case 1: return {1};
    case 5: return {3};
    case 6: return {4};
    case 7: return {3, 5};
    case 8: return {2};
    case 9: return {1};
    case 14: return {4};
    case 15: return {3, 5};
    case 16: return {2, 4, 6};
    case 17: return {1};
    case 33: return {3, 5};
    case 34: return {2, 4, 6};
    case 35: return {1};
    case 53: return {1, 3, 5};
    default: return {};
  }
}

int bond_valence(BondOrder order) {
  switch (order) {
    case BondOrder::kSingle: return 1;
    case BondOrder::kDouble: return 2;
    case BondOrder::kTriple: return 3;
    case BondOrder::kAromatic: return 1;
  }
  return 1;
}

// Aromatic atoms from the {B, C, N, P} column contribute one extra valence
// unit for their pi bond; chalcogens donate a lone pair instead.
int aromatic_extra(const Atom& atom) {
  switch (atom.atomic_number) {
    case 5:
    case 6:
    case 7:
    case 15:
    case 33:
      return 1;
    default:
      return 0;
  }
}

}  // namespace

std::string_view element_symbol(int atomic_number) {
  if (atomic_number < 0 || atomic_number >= static_cast<int>(kSymbols.size())) return "?";
  return kSymbols[static_cast<std::size_t>(atomic_number)];
}

std::optional<int> atomic_number(std::string_view symbol) {
  for (std::size_t z = 0; z < kSymbols.size(); ++z) {
    if (kSymbols[z] == symbol) return static_cast<int>(z);
  }
  return std::nullopt;
}

int Molecule::add_atom(const Atom& atom) {
  atoms_.push_back(atom);
  adjacency_.emplace_back();
  return static_cast<int>(atoms_.size() - 1);
}

int Molecule::add_bond(int a, int b, BondOrder order) {
  if (a == b) throw ParseError("bond from an atom to itself");
  if (find_bond(a, b)) throw ParseError("duplicate bond between the same atoms");
  bonds_.push_back({a, b, order});
  const int idx = static_cast<int>(bonds_.size() - 1);
  adjacency_[static_cast<std::size_t>(a)].push_back(idx);
  adjacency_[static_cast<std::size_t>(b)].push_back(idx);
  return idx;
}

std::optional<int> Molecule::find_bond(int a, int b) const {
  for (int bi : incident(a)) {
    if (bonds_[static_cast<std::size_t>(bi)].other(a) == b) return bi;
  }
  return std::nullopt;
}

void Molecule::perceive() {
  assign_implicit_hydrogens();
  perceive_aromaticity();
  assign_hybridization();
}

void Molecule::assign_implicit_hydrogens() {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    Atom& atom = atoms_[i];
    int used = atom.explicit_h;
    for (int bi : adjacency_[i]) used += bond_valence(bonds_[static_cast<std::size_t>(bi)].order);
    if (atom.aromatic) used += aromatic_extra(atom);

    // Charged atoms follow the valence model of their isoelectronic
    // neighbour (N+ like C, O- like F).
    const auto valences = allowed_valences(atom.atomic_number - atom.formal_charge);
    atom.implicit_h = 0;
    atom.radical_electrons = 0;
    if (valences.empty()) continue;
    if (atom.bracket) {
      if (!atom.aromatic && used < valences.front()) atom.radical_electrons = valences.front() - used;
      continue;
    }
    if (atom.aromatic) {
      atom.implicit_h = std::max(0, valences.front() - used);
      continue;
    }
    for (int v : valences) {
      if (v >= used) {
        atom.implicit_h = v - used;
        break;
      }
    }
  }
}

std::vector<std::vector<int>> Molecule::rings() const {
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> out;
  const int n = static_cast<int>(atoms_.size());
  for (std::size_t bi = 0; bi < bonds_.size(); ++bi) {
    const Bond& removed = bonds_[bi];
    // BFS from begin to end without using bond bi.
    std::vector<int> parent(static_cast<std::size_t>(n), -2);
    std::deque<int> queue{removed.begin};
    parent[static_cast<std::size_t>(removed.begin)] = -1;
    while (!queue.empty() && parent[static_cast<std::size_t>(removed.end)] == -2) {
      int u = queue.front();
      queue.pop_front();
      for (int b : adjacency_[static_cast<std::size_t>(u)]) {
        if (static_cast<std::size_t>(b) == bi) continue;
        int v = bonds_[static_cast<std::size_t>(b)].other(u);
        if (parent[static_cast<std::size_t>(v)] != -2) continue;
        parent[static_cast<std::size_t>(v)] = u;
        queue.push_back(v);
      }
    }
    if (parent[static_cast<std::size_t>(removed.end)] == -2) continue;
    std::vector<int> ring;
    for (int v = removed.end; v != -1; v = parent[static_cast<std::size_t>(v)]) ring.push_back(v);
    std::vector<int> key = ring;
    std::sort(key.begin(), key.end());
    if (seen.insert(key).second) out.push_back(std::move(ring));
  }
  return out;
}

std::vector<bool> Molecule::ring_atoms() const {
  std::vector<bool> in_ring(atoms_.size(), false);
  for (const auto& ring : rings()) {
    for (int a : ring) in_ring[static_cast<std::size_t>(a)] = true;
  }
  return in_ring;
}

void Molecule::perceive_aromaticity() {
  const auto ring_list = rings();
  std::vector<bool> in_ring(atoms_.size(), false);
  for (const auto& ring : ring_list) {
    for (int a : ring) in_ring[static_cast<std::size_t>(a)] = true;
  }

  // Hückel count over each ring written in Kekulé form. A ring atom donates
  // one electron per double bond to another ring atom, zero for an
  // exocyclic double bond, two for a lone pair (N, O, S, anionic C).
  auto pi_electrons = [&](int a, std::optional<int>& out) {
    const Atom& atom = atoms_[static_cast<std::size_t>(a)];
    if (atom.aromatic) {
      out = std::nullopt;  // already flagged by the input
      return;
    }
    int endo_double = 0;
    int exo_double = 0;
    for (int bi : adjacency_[static_cast<std::size_t>(a)]) {
      const Bond& b = bonds_[static_cast<std::size_t>(bi)];
      if (b.order == BondOrder::kTriple) {
        out = std::nullopt;
        return;
      }
      if (b.order == BondOrder::kDouble) {
        (in_ring[static_cast<std::size_t>(b.other(a))] ? endo_double : exo_double) += 1;
      }
    }
    if (endo_double == 1 && exo_double == 0) {
      out = 1;
    } else if (endo_double == 0 && exo_double == 1) {
      out = 0;
    } else if (endo_double == 0 && exo_double == 0) {
      switch (atom.atomic_number) {
        case 7:
        case 8:
        case 16:
        case 34:
          out = atom.formal_charge > 0 ? std::nullopt : std::optional<int>(2);
          return;
        case 6:
          out = atom.formal_charge < 0 ? std::optional<int>(2)
                                       : (atom.formal_charge > 0 ? std::optional<int>(0)
                                                                 : std::nullopt);
          return;
        default:
          out = std::nullopt;
          return;
      }
    } else {
      out = std::nullopt;
    }
  };

  for (const auto& ring : ring_list) {
    if (ring.size() < 5 || ring.size() > 7) continue;
    int electrons = 0;
    bool candidate = true;
    for (int a : ring) {
      std::optional<int> e;
      pi_electrons(a, e);
      if (!e) {
        candidate = false;
        break;
      }
      electrons += *e;
    }
    if (!candidate || electrons < 2 || (electrons - 2) % 4 != 0) continue;
    for (std::size_t k = 0; k < ring.size(); ++k) {
      int a = ring[k];
      int b = ring[(k + 1) % ring.size()];
      atoms_[static_cast<std::size_t>(a)].aromatic = true;
      if (auto bi = find_bond(a, b)) bonds_[static_cast<std::size_t>(*bi)].order = BondOrder::kAromatic;
    }
  }
}

void Molecule::assign_hybridization() {
  std::vector<bool> unsaturated(atoms_.size(), false);
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].aromatic) unsaturated[i] = true;
    for (int bi : adjacency_[i]) {
      if (bonds_[static_cast<std::size_t>(bi)].order != BondOrder::kSingle) unsaturated[i] = true;
    }
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    Atom& atom = atoms_[i];
    const int degree = static_cast<int>(adjacency_[i].size());
    int doubles = 0;
    int triples = 0;
    for (int bi : adjacency_[i]) {
      auto order = bonds_[static_cast<std::size_t>(bi)].order;
      doubles += order == BondOrder::kDouble ? 1 : 0;
      triples += order == BondOrder::kTriple ? 1 : 0;
    }
    const int steric = degree + atom.total_h();
    if (steric == 0) {
      atom.hybridization = Hybridization::kUnspecified;
    } else if (atom.aromatic) {
      atom.hybridization = Hybridization::kSp2;
    } else if (triples > 0 || doubles >= 2) {
      atom.hybridization = Hybridization::kSp;
    } else if (doubles == 1) {
      atom.hybridization = Hybridization::kSp2;
    } else if (steric >= 6) {
      atom.hybridization = Hybridization::kSp3d2;
    } else if (steric == 5) {
      atom.hybridization = Hybridization::kSp3d;
    } else {
      atom.hybridization = Hybridization::kSp3;
      // Lone-pair donors conjugated with an unsaturated neighbour (amide N,
      // aniline N, phenol O) are planar.
      const int z = atom.atomic_number;
      if ((z == 7 || z == 8 || z == 16) && degree <= 3) {
        for (int bi : adjacency_[i]) {
          int nb = bonds_[static_cast<std::size_t>(bi)].other(static_cast<int>(i));
          if (unsaturated[static_cast<std::size_t>(nb)]) {
            atom.hybridization = Hybridization::kSp2;
            break;
          }
        }
      }
    }
  }
}

Molecule Molecule::permuted(const std::vector<int>& order) const {
  if (order.size() != atoms_.size()) throw InvalidArgument("permutation size mismatch");
  std::vector<int> new_index(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) new_index[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
  Molecule out;
  for (int old : order) out.add_atom(atoms_[static_cast<std::size_t>(old)]);
  std::vector<std::tuple<int, int, BondOrder>> bonds;
  for (const auto& b : bonds_) {
    int a = new_index[static_cast<std::size_t>(b.begin)];
    int c = new_index[static_cast<std::size_t>(b.end)];
    bonds.emplace_back(std::min(a, c), std::max(a, c), b.order);
  }
  std::sort(bonds.begin(), bonds.end());
  for (const auto& [a, c, o] : bonds) out.add_bond(a, c, o);
  return out;
}

std::vector<int> canonical_ranks(const Molecule& mol, const std::function<bool(int, int)>& tie_less) {
  const std::size_t n = mol.num_atoms();
  using Invariant = std::vector<long long>;
  std::vector<Invariant> inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Atom& a = mol.atom(static_cast<int>(i));
    inv[i] = {a.atomic_number, mol.degree(static_cast<int>(i)), a.total_h(), a.formal_charge,
              a.aromatic ? 1 : 0, a.isotope};
  }
  auto rank_of = [&](const std::vector<Invariant>& values) {
    std::vector<Invariant> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> ranks(n);
    for (std::size_t i = 0; i < n; ++i) {
      ranks[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), values[i]) -
                                  sorted.begin());
    }
    return ranks;
  };
  auto count_classes = [](const std::vector<int>& ranks) {
    return std::set<int>(ranks.begin(), ranks.end()).size();
  };
  auto refine = [&](std::vector<int> ranks) {
    while (true) {
      std::vector<Invariant> next(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<int, int>> nbrs;
        for (int bi : mol.incident(static_cast<int>(i))) {
          const Bond& b = mol.bonds()[static_cast<std::size_t>(bi)];
          nbrs.emplace_back(ranks[static_cast<std::size_t>(b.other(static_cast<int>(i)))],
                            static_cast<int>(b.order));
        }
        std::sort(nbrs.begin(), nbrs.end());
        next[i] = {ranks[i]};
        for (auto [r, o] : nbrs) {
          next[i].push_back(r);
          next[i].push_back(o);
        }
      }
      auto updated = rank_of(next);
      if (count_classes(updated) == count_classes(ranks)) return updated;
      ranks = std::move(updated);
    }
  };

  std::vector<int> ranks = refine(rank_of(inv));
  // Break remaining ties (symmetry classes): split off the lowest-index atom
  // of the smallest tied class and refine again.
  while (count_classes(ranks) < n) {
    std::map<int, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < n; ++i) classes[ranks[i]].push_back(i);
    for (const auto& [r, members] : classes) {
      if (members.size() < 2) continue;
      std::size_t pick = members.front();
      if (tie_less) {
        for (auto m : members) {
          if (tie_less(static_cast<int>(m), static_cast<int>(pick))) pick = m;
        }
      }
      std::vector<Invariant> split(n);
      for (std::size_t i = 0; i < n; ++i) split[i] = {2LL * ranks[i] + (ranks[i] == r && i != pick ? 1 : 0)};
      ranks = refine(rank_of(split));
      break;
    }
  }
  return ranks;
}

std::vector<int> canonical_order(const Molecule& mol, const std::function<bool(int, int)>& tie_less) {
  auto ranks = canonical_ranks(mol, tie_less);
  std::vector<int> order(mol.num_atoms());
  for (std::size_t i = 0; i < ranks.size(); ++i) order[static_cast<std::size_t>(ranks[i])] = static_cast<int>(i);
  return order;
}

}  // namespace scope::chem
