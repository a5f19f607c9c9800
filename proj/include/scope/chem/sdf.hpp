// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scope/chem/molecule.hpp"

namespace scope::chem {

using Vec3 = std::array<double, 3>;

// One V2000 molfile record. Atoms are listed as in the file, hydrogens
// included.
struct MolBlock {
  std::string title;
  std::vector<int> atomic_numbers;
  std::vector<Vec3> coords;
  std::vector<int> charges;
  std::vector<int> radicals;
  std::vector<int> isotopes;
  struct Entry {
    int a;
    int b;
    int type;  // 1 single, 2 double, 3 triple, 4 aromatic
  };
  std::vector<Entry> bonds;
};

// Parses the first record of an SDF/MOL text (V2000).
MolBlock parse_molblock(std::string_view text);
MolBlock read_molblock(const std::filesystem::path& path);

// Molecule plus heavy-atom coordinates from a molfile. Hydrogen atoms are
// folded into their neighbour's explicit count.
struct ConformerMolecule {
  Molecule molecule;
  std::vector<Vec3> coords;
};
ConformerMolecule molecule_from_molblock(const MolBlock& block);

// Heavy-atom coordinates of `block` matched onto `mol` by position: the k-th
// heavy atom of the file is atom k of the molecule. Throws ParseError when
// counts or elements disagree.
std::vector<Vec3> heavy_atom_coords(const MolBlock& block, const Molecule& mol);

// Writes a single-record V2000 SDF for a heavy-atom molecule.
std::string format_sdf(const Molecule& mol, const std::vector<Vec3>& coords,
                       std::string_view title);

}  // namespace scope::chem
