// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/model/batch.hpp"

#include "scope/util/error.hpp"

namespace scope::model {
namespace {

void append_edges(featurize::EdgeList& out, const featurize::EdgeList& in, int offset) {
  for (std::size_t e = 0; e < in.size(); ++e) out.add(in.src[e] + offset, in.dst[e] + offset);
}

}  // namespace

ProteinBatch ProteinBatch::build(const std::vector<const featurize::ProteinGraph*>& graphs) {
  ProteinBatch b;
  for (const auto* g : graphs) {
    if (g->num_residues() == 0) throw InvalidArgument("protein batch: empty protein graph");
    const auto offset = static_cast<int>(b.residue_types.size());
    b.ranges.push_back({offset, static_cast<Eigen::Index>(g->num_residues())});
    b.residue_types.insert(b.residue_types.end(), g->residue_types.begin(), g->residue_types.end());
    for (std::size_t t = 0; t < b.edges.size(); ++t) append_edges(b.edges[t], g->edges_by_type[t], offset);
  }
  return b;
}

MoleculeBatch MoleculeBatch::build(const std::vector<const featurize::CompoundFeatures*>& compounds) {
  MoleculeBatch b;
  Eigen::Index atoms = 0;
  Eigen::Index edges = 0;
  Eigen::Index feature_dim = -1;
  Eigen::Index rbf_dim = 0;
  std::size_t bits = 0;
  for (const auto* c : compounds) {
    if (c->graph.num_atoms() == 0) throw InvalidArgument("molecule batch: empty molecule graph");
    if (feature_dim >= 0 && c->graph.atom_scalar.cols() != feature_dim) {
      throw InvalidArgument("molecule batch: atom feature widths differ");
    }
    feature_dim = c->graph.atom_scalar.cols();
    rbf_dim = std::max(rbf_dim, c->graph.edge_rbf.cols());
    bits = std::max(bits, c->fingerprint.size());
    atoms += c->graph.atom_scalar.rows();
    edges += static_cast<Eigen::Index>(c->graph.edges.size());
  }
  b.atom_scalar.resize(atoms, std::max<Eigen::Index>(feature_dim, 0));
  b.coords.resize(atoms, 3);
  b.edge_vec.resize(edges, 3);
  b.edge_rbf.resize(edges, rbf_dim);
  b.fingerprints = Matrix::Zero(static_cast<Eigen::Index>(compounds.size()), static_cast<Eigen::Index>(bits));
  Eigen::Index a0 = 0;
  Eigen::Index e0 = 0;
  for (std::size_t m = 0; m < compounds.size(); ++m) {
    const auto& g = compounds[m]->graph;
    const auto n = g.atom_scalar.rows();
    const auto ne = static_cast<Eigen::Index>(g.edges.size());
    b.ranges.push_back({a0, n});
    b.atom_scalar.middleRows(a0, n) = g.atom_scalar;
    const RowVector centroid = g.atom_coords.colwise().mean();
    b.coords.middleRows(a0, n) = g.atom_coords.rowwise() - centroid;
    if (ne > 0) {
      b.edge_vec.middleRows(e0, ne) = g.edge_vec;
      b.edge_rbf.middleRows(e0, ne) = g.edge_rbf;
    }
    append_edges(b.edges, g.edges, static_cast<int>(a0));
    append_edges(b.bonds, g.bonds, static_cast<int>(a0));
    b.graph_of_atom.insert(b.graph_of_atom.end(), static_cast<std::size_t>(n), static_cast<int>(m));
    const auto& fp = compounds[m]->fingerprint;
    for (std::size_t bit = 0; bit < fp.size(); ++bit) {
      if (fp.test(bit)) b.fingerprints(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(bit)) = 1.0;
    }
    a0 += n;
    e0 += ne;
  }
  return b;
}

}  // namespace scope::model
