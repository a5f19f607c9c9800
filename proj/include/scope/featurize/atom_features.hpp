// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string_view>

#include "scope/chem/molecule.hpp"
#include "scope/util/matrix.hpp"

namespace scope::featurize {

// Layout of the 74-dim atom descriptor. Widths per category:
//   atom type one-hot        43  (kAtomTypes; unlisted elements are all-zero)
//   degree one-hot           11  (0..10)
//   implicit H one-hot        7  (0..6)
//   formal charge             1  (integer value)
//   radical electrons         1  (integer value)
//   hybridization one-hot     5  (SP, SP2, SP3, SP3D, SP3D2)
//   aromatic flag             1
//   total H one-hot           5  (0..4)
struct AtomFeatureCategory {
  std::string_view name;
  int offset;
  int width;
};

inline constexpr std::array<std::string_view, 43> kAtomTypes = {
    "C",  "N",  "O",  "S",  "F",  "Si", "P",  "Cl", "Br", "Mg", "Na", "Ca", "Fe", "As", "Al",
    "I",  "B",  "V",  "K",  "Tl", "Yb", "Sb", "Sn", "Ag", "Pd", "Co", "Se", "Ti", "Zn", "H",
    "Li", "Ge", "Cu", "Au", "Ni", "Cd", "In", "Mn", "Zr", "Cr", "Pt", "Hg", "Pb"};

inline constexpr std::array<AtomFeatureCategory, 8> kAtomFeatureLayout = {{
    {"atom_type", 0, 43},
    {"degree", 43, 11},
    {"implicit_h", 54, 7},
    {"formal_charge", 61, 1},
    {"radical_electrons", 62, 1},
    {"hybridization", 63, 5},
    {"aromatic", 68, 1},
    {"total_h", 69, 5},
}};

inline constexpr int kAtomFeatureDim = 74;

// One row per atom, integer-valued entries.
Matrix atom_features(const chem::Molecule& mol);

}  // namespace scope::featurize
