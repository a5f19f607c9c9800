// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "scope/chem/molecule.hpp"

namespace scope::featurize {

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n_bits) : n_bits_(n_bits), words_((n_bits + 63) / 64, 0) {}

  std::size_t size() const { return n_bits_; }
  void set(std::size_t bit) { words_[bit / 64] |= (1ULL << (bit % 64)); }
  bool test(std::size_t bit) const { return (words_[bit / 64] >> (bit % 64)) & 1ULL; }
  std::size_t count() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t n_bits_ = 0;
  std::vector<std::uint64_t> words_;
};

// Circular-substructure fingerprint: each atom starts from a hash of
// (element, heavy degree, total H, charge, ring membership, aromaticity),
// and each of `radius` rounds rehashes the atom identifier with its sorted
// (bond order, neighbour identifier) list. All identifiers from all rounds
// are folded into `n_bits` by modulo.
BitVector morgan_fingerprint(const chem::Molecule& mol, int radius = 2, std::size_t n_bits = 2048);

// Parses SMILES first; throws chem::SmilesError on invalid input.
BitVector fingerprint(std::string_view smiles, int radius = 2, std::size_t n_bits = 2048);

// |a & b| / |a | b|; 0 when both are empty.
double tanimoto(const BitVector& a, const BitVector& b);

}  // namespace scope::featurize
