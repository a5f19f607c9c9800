// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scope/util/matrix.hpp"

namespace scope::featurize {

struct PdbResidue {
  std::string name;  // three-letter code
  char chain = ' ';
  int seq_number = 0;
  char insertion_code = ' ';
  std::vector<std::array<double, 3>> atoms;
};

// ATOM records (and HETATM records of modified amino acids such as MSE) of
// the first model. Alternate locations other than blank or 'A' are skipped.
std::vector<PdbResidue> parse_pdb(std::string_view text);

// Per-residue mean of atom coordinates for the first |sequence| residues.
// Throws ParseError when the file holds fewer residues than the sequence.
Matrix residue_centroids(const std::vector<PdbResidue>& residues, std::size_t sequence_length);
Matrix parse_protein_structure(const std::filesystem::path& path, std::string_view sequence);

}  // namespace scope::featurize
