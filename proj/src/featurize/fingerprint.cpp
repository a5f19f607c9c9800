// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/featurize/fingerprint.hpp"

#include <algorithm>
#include <bit>

#include "scope/chem/smiles.hpp"
#include "scope/util/error.hpp"

namespace scope::featurize {
namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 finaliser over a running combination.
  std::uint64_t z = h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::size_t BitVector::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

BitVector morgan_fingerprint(const chem::Molecule& mol, int radius, std::size_t n_bits) {
  if (n_bits == 0) throw InvalidArgument("fingerprint: n_bits must be positive");
  const std::size_t n = mol.num_atoms();
  const auto in_ring = mol.ring_atoms();
  std::vector<std::uint64_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = mol.atom(static_cast<int>(i));
    std::uint64_t h = 0x5c0beULL;
    for (std::uint64_t v :
         {static_cast<std::uint64_t>(a.atomic_number), static_cast<std::uint64_t>(mol.degree(static_cast<int>(i))),
          static_cast<std::uint64_t>(a.total_h()), static_cast<std::uint64_t>(a.formal_charge + 16),
          static_cast<std::uint64_t>(in_ring[i] ? 1 : 0), static_cast<std::uint64_t>(a.aromatic ? 1 : 0)}) {
      h = mix(h, v);
    }
    ids[i] = h;
  }
  BitVector bits(n_bits);
  for (auto id : ids) bits.set(id % n_bits);
  for (int round = 1; round <= radius; ++round) {
    std::vector<std::uint64_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
      for (int bi : mol.incident(static_cast<int>(i))) {
        const auto& b = mol.bonds()[static_cast<std::size_t>(bi)];
        env.emplace_back(static_cast<std::uint64_t>(b.order), ids[static_cast<std::size_t>(b.other(static_cast<int>(i)))]);
      }
      std::sort(env.begin(), env.end());
      std::uint64_t h = mix(static_cast<std::uint64_t>(round), ids[i]);
      for (auto [order, nid] : env) h = mix(mix(h, order), nid);
      next[i] = h;
    }
    ids = std::move(next);
    for (auto id : ids) bits.set(id % n_bits);
  }
  return bits;
}

BitVector fingerprint(std::string_view smiles, int radius, std::size_t n_bits) {
  return morgan_fingerprint(chem::parse_smiles(smiles), radius, n_bits);
}

double tanimoto(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw InvalidArgument("tanimoto: bit vectors differ in length");
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t k = 0; k < a.words().size(); ++k) {
    inter += static_cast<std::size_t>(std::popcount(a.words()[k] & b.words()[k]));
    uni += static_cast<std::size_t>(std::popcount(a.words()[k] | b.words()[k]));
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace scope::featurize
