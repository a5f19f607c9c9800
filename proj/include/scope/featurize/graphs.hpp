// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "scope/chem/molecule.hpp"
#include "scope/chem/sdf.hpp"
#include "scope/util/matrix.hpp"

namespace scope::featurize {

// Directed edges; a message flows from src[e] to dst[e].
struct EdgeList {
  std::vector<int> src;
  std::vector<int> dst;

  std::size_t size() const { return src.size(); }
  void add(int s, int d) {
    src.push_back(s);
    dst.push_back(d);
  }
  friend bool operator==(const EdgeList&, const EdgeList&) = default;
};

enum class ProteinEdgeType { kSequential = 0, kRadius = 1 };
inline constexpr int kNumProteinEdgeTypes = 2;
std::string_view edge_type_name(ProteinEdgeType type);

struct ProteinGraph {
  std::vector<int> residue_types;
  Matrix residue_centroids;  // M x 3
  std::array<EdgeList, kNumProteinEdgeTypes> edges_by_type;
  double d_r = 10.0;

  std::size_t num_residues() const { return residue_types.size(); }
  const EdgeList& edges(ProteinEdgeType t) const { return edges_by_type[static_cast<std::size_t>(t)]; }
};

// Sequence must already be truncated to the centroid count.
ProteinGraph build_protein_graph(std::string_view sequence, const Matrix& centroids, double d_r = 10.0);

struct MoleculeGraphOptions {
  double cutoff = 4.5;
  int n_rbf = 16;
  bool canonical_order = true;
};

struct MoleculeGraph {
  Matrix atom_scalar;  // N x 74
  Matrix atom_coords;  // N x 3
  EdgeList edges;      // pairs closer than the cutoff, both directions
  Matrix edge_vec;     // E x 3, unit vector from dst toward src
  Matrix edge_rbf;     // E x n_rbf
  EdgeList bonds;      // covalent bonds, both directions (2D graph variant)

  std::size_t num_atoms() const { return static_cast<std::size_t>(atom_scalar.rows()); }
};

// Heavy-atom molecule with one coordinate per atom.
MoleculeGraph build_molecule_graph(const chem::Molecule& mol, const std::vector<chem::Vec3>& coords,
                                   const MoleculeGraphOptions& options = {});

}  // namespace scope::featurize
