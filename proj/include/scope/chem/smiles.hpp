// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "scope/chem/molecule.hpp"
#include "scope/util/error.hpp"

namespace scope::chem {

// Raised with the 0-based character offset of the problem.
class SmilesError : public ParseError {
 public:
  SmilesError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Parses a SMILES string into a heavy-atom molecule. Explicit [H] atoms are
// folded into their neighbour's hydrogen count. Stereo marks are accepted
// and ignored. Throws SmilesError for malformed input or a molecule with no
// heavy atoms.
Molecule parse_smiles(std::string_view smiles);

// True when parse_smiles would succeed.
bool is_valid_smiles(std::string_view smiles);

}  // namespace scope::chem
