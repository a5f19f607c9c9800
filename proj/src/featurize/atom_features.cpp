// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/featurize/atom_features.hpp"

#include <algorithm>

namespace scope::featurize {
namespace {

void one_hot(Matrix& m, Eigen::Index row, const AtomFeatureCategory& cat, int value) {
  if (value >= 0 && value < cat.width) m(row, cat.offset + value) = 1.0;
}

int hybridization_index(chem::Hybridization h) {
  switch (h) {
    case chem::Hybridization::kSp: return 0;
    case chem::Hybridization::kSp2: return 1;
    case chem::Hybridization::kSp3: return 2;
    case chem::Hybridization::kSp3d: return 3;
    case chem::Hybridization::kSp3d2: return 4;
    case chem::Hybridization::kUnspecified: return -1;
  }
  return -1;
}

}  // namespace

Matrix atom_features(const chem::Molecule& mol) {
  const auto n = static_cast<Eigen::Index>(mol.num_atoms());
  Matrix m = Matrix::Zero(n, kAtomFeatureDim);
  const auto& L = kAtomFeatureLayout;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& atom = mol.atom(static_cast<int>(i));
    auto symbol = chem::element_symbol(atom.atomic_number);
    auto it = std::find(kAtomTypes.begin(), kAtomTypes.end(), symbol);
    if (it != kAtomTypes.end()) one_hot(m, i, L[0], static_cast<int>(it - kAtomTypes.begin()));
    one_hot(m, i, L[1], mol.degree(static_cast<int>(i)));
    one_hot(m, i, L[2], atom.implicit_h);
    m(i, L[3].offset) = atom.formal_charge;
    m(i, L[4].offset) = atom.radical_electrons;
    one_hot(m, i, L[5], hybridization_index(atom.hybridization));
    m(i, L[6].offset) = atom.aromatic ? 1.0 : 0.0;
    one_hot(m, i, L[7], atom.total_h());
  }
  return m;
}

}  // namespace scope::featurize
