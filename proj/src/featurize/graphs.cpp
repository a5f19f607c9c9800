// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/featurize/graphs.hpp"

#include <fmt/format.h>

#include <cmath>

#include "scope/core/types.hpp"
#include "scope/featurize/atom_features.hpp"
#include "scope/featurize/rbf.hpp"
#include "scope/util/error.hpp"

namespace scope::featurize {

std::string_view edge_type_name(ProteinEdgeType type) {
  return type == ProteinEdgeType::kSequential ? "sequential" : "radius";
}

ProteinGraph build_protein_graph(std::string_view sequence, const Matrix& centroids, double d_r) {
  if (sequence.empty()) throw InvalidArgument("protein graph: empty sequence");
  if (static_cast<Eigen::Index>(sequence.size()) != centroids.rows() || centroids.cols() != 3) {
    throw InvalidArgument(fmt::format("protein graph: {} residues but {} centroids", sequence.size(),
                                      centroids.rows()));
  }
  ProteinGraph g;
  g.residue_types = core::tokenize_sequence(sequence);
  g.residue_centroids = centroids;
  g.d_r = d_r;
  const int m = static_cast<int>(sequence.size());
  auto& seq = g.edges_by_type[static_cast<std::size_t>(ProteinEdgeType::kSequential)];
  for (int i = 0; i + 1 < m; ++i) {
    seq.add(i, i + 1);
    seq.add(i + 1, i);
  }
  auto& rad = g.edges_by_type[static_cast<std::size_t>(ProteinEdgeType::kRadius)];
  const double r2 = d_r * d_r;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      if ((centroids.row(i) - centroids.row(j)).squaredNorm() < r2) rad.add(j, i);
    }
  }
  return g;
}

MoleculeGraph build_molecule_graph(const chem::Molecule& input, const std::vector<chem::Vec3>& input_coords,
                                   const MoleculeGraphOptions& options) {
  if (input.num_atoms() == 0) throw InvalidArgument("molecule graph: no atoms");
  if (input_coords.size() != input.num_atoms()) {
    throw InvalidArgument(fmt::format("molecule graph: {} atoms but {} coordinates", input.num_atoms(),
                                      input_coords.size()));
  }
  std::vector<int> order(input.num_atoms());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  if (options.canonical_order) {
    // Symmetry-equivalent atoms are told apart by their coordinates so that
    // the order does not depend on how the input was written.
    order = chem::canonical_order(input, [&](int a, int b) {
      return input_coords[static_cast<std::size_t>(a)] < input_coords[static_cast<std::size_t>(b)];
    });
  }
  const chem::Molecule mol = input.permuted(order);

  MoleculeGraph g;
  g.atom_scalar = atom_features(mol);
  const auto n = static_cast<Eigen::Index>(mol.num_atoms());
  g.atom_coords.resize(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& c = input_coords[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    g.atom_coords.row(i) << c[0], c[1], c[2];
  }

  std::vector<std::vector<double>> rbf;
  std::vector<std::array<double, 3>> vec;
  const double cut2 = options.cutoff * options.cutoff;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const RowVector d = g.atom_coords.row(j) - g.atom_coords.row(i);
      const double d2 = d.squaredNorm();
      if (!(d2 < cut2)) continue;
      const double len = std::sqrt(d2);
      if (len == 0.0) throw InvalidArgument("molecule graph: coincident atoms");
      g.edges.add(static_cast<int>(j), static_cast<int>(i));
      vec.push_back({d(0) / len, d(1) / len, d(2) / len});
      rbf.push_back(rbf_expand(len, options.n_rbf, 0.0, options.cutoff));
    }
  }
  const auto e = static_cast<Eigen::Index>(g.edges.size());
  g.edge_vec.resize(e, 3);
  g.edge_rbf.resize(e, options.n_rbf);
  for (Eigen::Index k = 0; k < e; ++k) {
    for (int d = 0; d < 3; ++d) g.edge_vec(k, d) = vec[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)];
    for (int r = 0; r < options.n_rbf; ++r) {
      g.edge_rbf(k, r) = rbf[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)];
    }
  }
  for (const auto& b : mol.bonds()) {
    g.bonds.add(b.begin, b.end);
    g.bonds.add(b.end, b.begin);
  }
  return g;
}

}  // namespace scope::featurize
