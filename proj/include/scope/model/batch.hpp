// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "scope/featurize/featurizer.hpp"
#include "scope/featurize/graphs.hpp"
#include "scope/nn/ops.hpp"

namespace scope::model {

using nn::RowRange;

// Disjoint union of protein graphs; indices are offset into the stacked
// residue rows.
struct ProteinBatch {
  std::vector<int> residue_types;
  std::array<featurize::EdgeList, featurize::kNumProteinEdgeTypes> edges;
  std::vector<RowRange> ranges;

  Eigen::Index num_residues() const { return static_cast<Eigen::Index>(residue_types.size()); }
  static ProteinBatch build(const std::vector<const featurize::ProteinGraph*>& graphs);
};

// Disjoint union of molecule graphs. Coordinates are centred on each
// molecule's centroid before they become GVP vector features.
struct MoleculeBatch {
  Matrix atom_scalar;
  Matrix coords;  // centred
  featurize::EdgeList edges;
  Matrix edge_vec;
  Matrix edge_rbf;
  featurize::EdgeList bonds;
  std::vector<int> graph_of_atom;
  std::vector<RowRange> ranges;
  Matrix fingerprints;  // one row per molecule

  Eigen::Index num_atoms() const { return atom_scalar.rows(); }
  std::size_t size() const { return ranges.size(); }
  static MoleculeBatch build(const std::vector<const featurize::CompoundFeatures*>& compounds);
};

}  // namespace scope::model
