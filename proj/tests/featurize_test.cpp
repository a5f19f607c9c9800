// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <set>

#include "scope/chem/conformer.hpp"
#include "scope/chem/sdf.hpp"
#include "scope/chem/smiles.hpp"
#include "scope/featurize/atom_features.hpp"
#include "scope/featurize/featurizer.hpp"
#include "scope/featurize/fingerprint.hpp"
#include "scope/featurize/graphs.hpp"
#include "scope/featurize/pdb.hpp"
#include "scope/featurize/rbf.hpp"
#include "scope/util/error.hpp"
#include "test_util.hpp"

namespace scope::featurize {
namespace {

TEST(Rbf, CentersAtEnds) {
  auto v = rbf_expand(0.0);
  ASSERT_EQ(v.size(), 16u);
  EXPECT_DOUBLE_EQ(v.front(), 1.0);
  EXPECT_DOUBLE_EQ(rbf_expand(4.5).back(), 1.0);
}

TEST(Rbf, MidpointProfileIsSymmetric) {
  // Closed form: mu_k = 0.3k, sigma = 0.3. 2.25 sits halfway between mu_7
  // and mu_8, so those two tie for the maximum and the profile mirrors.
  auto v = rbf_expand(2.25);
  const double sigma = 4.5 / 15.0;
  for (int k = 0; k < 16; ++k) {
    const double mu = sigma * k;
    EXPECT_NEAR(v[static_cast<std::size_t>(k)], std::exp(-(2.25 - mu) * (2.25 - mu) / (2 * sigma * sigma)), 1e-12);
    EXPECT_NEAR(v[static_cast<std::size_t>(k)], v[static_cast<std::size_t>(15 - k)], 1e-12);
  }
  const auto top = *std::max_element(v.begin(), v.end());
  EXPECT_DOUBLE_EQ(v[7], top);
  EXPECT_DOUBLE_EQ(v[8], top);
}

TEST(Rbf, ComponentsInUnitIntervalAndArgmaxIsNearestCenter) {
  Rng rng(1);
  const auto mu = rbf_centers();
  for (int i = 0; i < 500; ++i) {
    const double d = rng.uniform(0.0, 4.5);
    auto v = rbf_expand(d);
    for (double x : v) {
      EXPECT_GT(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    auto arg = std::max_element(v.begin(), v.end()) - v.begin();
    auto nearest = std::min_element(mu.begin(), mu.end(), [&](double a, double b) {
                     return std::abs(a - d) < std::abs(b - d);
                   }) - mu.begin();
    EXPECT_EQ(arg, nearest) << d;
  }
  EXPECT_THROW(rbf_expand(-0.1), InvalidArgument);
}

TEST(Pdb, GlycineCentroid) {
  auto residues = parse_pdb(
      "ATOM      1  N   GLY A   1       0.000   0.000   0.000  1.00  0.00           N\n"
      "ATOM      2  CA  GLY A   1       2.000   0.000   0.000  1.00  0.00           C\n");
  auto c = residue_centroids(residues, 1);
  EXPECT_DOUBLE_EQ(c(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(c(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(c(0, 2), 0.0);
}

TEST(Pdb, ResidueCountsAgainstSequence) {
  Matrix xyz(5, 3);
  for (int i = 0; i < 5; ++i) xyz.row(i) << 3.8 * i, 0, 0;
  scope::testing::TempDir dir("pdb");
  write_file(dir / "p.pdb", scope::testing::ca_trace_pdb("MKVLA", xyz));
  EXPECT_EQ(parse_protein_structure(dir / "p.pdb", "MKV").rows(), 3);
  EXPECT_EQ(parse_protein_structure(dir / "p.pdb", "MKVLA").rows(), 5);
  EXPECT_THROW(parse_protein_structure(dir / "p.pdb", "MKVLAGG"), ParseError);
  write_file(dir / "bad.pdb", "HEADER nothing here\n");
  EXPECT_THROW(parse_protein_structure(dir / "bad.pdb", "M"), ParseError);
}

TEST(Pdb, AltLocsHetatmAndModels) {
  auto residues = parse_pdb(
      "MODEL        1\n"
      "ATOM      1  CA  ALA A   1       1.000   0.000   0.000  1.00  0.00           C\n"
      "ATOM      2  CB AALA A   1       3.000   0.000   0.000  0.50  0.00           C\n"
      "ATOM      3  CB BALA A   1      99.000   0.000   0.000  0.50  0.00           C\n"
      "HETATM    4  CA  MSE A   2       5.000   0.000   0.000  1.00  0.00           C\n"
      "HETATM    5  O   HOH A 101       9.000   9.000   9.000  1.00  0.00           O\n"
      "ENDMDL\n"
      "MODEL        2\n"
      "ATOM      1  CA  ALA A   1      50.000   0.000   0.000  1.00  0.00           C\n"
      "ENDMDL\n");
  ASSERT_EQ(residues.size(), 2u);
  EXPECT_EQ(residues[0].atoms.size(), 2u);
  EXPECT_EQ(residues[1].name, "MSE");
  EXPECT_DOUBLE_EQ(residue_centroids(residues, 2)(0, 0), 2.0);
}

Matrix points(std::initializer_list<std::array<double, 3>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), 3);
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    m.row(i++) << r[0], r[1], r[2];
  }
  return m;
}

std::set<std::pair<int, int>> edge_set(const EdgeList& e) {
  std::set<std::pair<int, int>> s;
  for (std::size_t k = 0; k < e.size(); ++k) s.insert({e.src[k], e.dst[k]});
  return s;
}

TEST(ProteinGraph, FarApartResidues) {
  auto g = build_protein_graph("MK", points({{0, 0, 0}, {20, 0, 0}}));
  EXPECT_EQ(g.edges(ProteinEdgeType::kSequential).size(), 2u);  // one undirected edge
  EXPECT_EQ(g.edges(ProteinEdgeType::kRadius).size(), 0u);
}

TEST(ProteinGraph, StrictRadiusCutoff) {
  auto g = build_protein_graph("MKV", points({{0, 0, 0}, {5, 0, 0}, {10, 0, 0}}));
  std::set<std::pair<int, int>> expect = {{0, 1}, {1, 0}, {1, 2}, {2, 1}};
  EXPECT_EQ(edge_set(g.edges(ProteinEdgeType::kRadius)), expect);
}

TEST(ProteinGraph, SingleResidueAndEmpty) {
  auto g = build_protein_graph("M", points({{0, 0, 0}}));
  EXPECT_EQ(g.edges(ProteinEdgeType::kSequential).size() + g.edges(ProteinEdgeType::kRadius).size(), 0u);
  EXPECT_THROW(build_protein_graph("", Matrix(0, 3)), InvalidArgument);
  EXPECT_THROW(build_protein_graph("MK", points({{0, 0, 0}})), InvalidArgument);
}

TEST(ProteinGraph, InvariantsOnRandomCentroids) {
  Rng rng(2);
  const int m = 40;
  Matrix c(m, 3);
  for (int i = 0; i < m; ++i) c.row(i) << rng.uniform(0, 30), rng.uniform(0, 30), rng.uniform(0, 30);
  std::string seq(m, 'A');
  auto g = build_protein_graph(seq, c);
  auto seq_edges = edge_set(g.edges(ProteinEdgeType::kSequential));
  for (int i = 0; i + 1 < m; ++i) {
    EXPECT_TRUE(seq_edges.contains({i, i + 1}));
    EXPECT_TRUE(seq_edges.contains({i + 1, i}));
  }
  EXPECT_EQ(seq_edges.size(), static_cast<std::size_t>(2 * (m - 1)));
  auto rad = edge_set(g.edges(ProteinEdgeType::kRadius));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const bool expect = i != j && (c.row(i) - c.row(j)).norm() < 10.0;
      EXPECT_EQ(rad.contains({i, j}), expect);
    }
  }
}

TEST(MoleculeGraph, TwoAtomsWithinCutoff) {
  auto mol = chem::parse_smiles("CO");
  auto g = build_molecule_graph(mol, {{0, 0, 0}, {3, 0, 0}}, {.canonical_order = false});
  ASSERT_EQ(g.edges.size(), 2u);
  for (Eigen::Index e = 0; e < 2; ++e) {
    EXPECT_NEAR(std::abs(g.edge_vec(e, 0)), 1.0, 1e-12);
    EXPECT_NEAR(g.edge_vec(e, 1), 0.0, 1e-12);
    EXPECT_NEAR(g.edge_vec(e, 2), 0.0, 1e-12);
  }
  EXPECT_EQ(g.edge_vec(0, 0), -g.edge_vec(1, 0));
  EXPECT_EQ(g.edge_rbf.cols(), 16);
}

TEST(MoleculeGraph, TwoAtomsBeyondCutoff) {
  auto g = build_molecule_graph(chem::parse_smiles("CO"), {{0, 0, 0}, {5, 0, 0}});
  EXPECT_EQ(g.edges.size(), 0u);
  EXPECT_EQ(g.bonds.size(), 2u);
}

TEST(MoleculeGraph, BenzeneFeaturesMatchHandBuiltRing) {
  // Hand-built aromatic ring, independent of the SMILES reader.
  chem::Molecule ring;
  for (int i = 0; i < 6; ++i) {
    chem::Atom a;
    a.aromatic = true;
    ring.add_atom(a);
  }
  for (int i = 0; i < 6; ++i) ring.add_bond(i, (i + 1) % 6, chem::BondOrder::kAromatic);
  ring.perceive();
  std::vector<chem::Vec3> xyz;
  for (int i = 0; i < 6; ++i) xyz.push_back({1.39 * std::cos(i * M_PI / 3), 1.39 * std::sin(i * M_PI / 3), 0.0});
  auto g = build_molecule_graph(ring, xyz);
  ASSERT_EQ(g.num_atoms(), 6u);
  RowVector expect = RowVector::Zero(kAtomFeatureDim);
  expect(0) = 1;        // carbon
  expect(43 + 2) = 1;   // degree 2
  expect(54 + 1) = 1;   // one implicit H
  expect(63 + 1) = 1;   // SP2
  expect(68) = 1;       // aromatic
  expect(69 + 1) = 1;   // one H in total
  for (Eigen::Index i = 0; i < 6; ++i) EXPECT_EQ(g.atom_scalar.row(i), expect) << i;

  auto parsed = build_molecule_graph(chem::parse_smiles("c1ccccc1"), xyz);
  EXPECT_EQ(parsed.atom_scalar, g.atom_scalar);
}

TEST(MoleculeGraph, LayoutWidthsSumToDim) {
  int total = 0;
  for (const auto& c : kAtomFeatureLayout) {
    EXPECT_EQ(c.offset, total);
    total += c.width;
  }
  EXPECT_EQ(total, kAtomFeatureDim);
}

TEST(MoleculeGraph, HeavyAtomsOnly) {
  auto g = build_molecule_graph(chem::parse_smiles("[H]OC([H])([H])[H]"), {{0, 0, 0}, {1.4, 0, 0}});
  EXPECT_EQ(g.num_atoms(), 2u);
}

std::vector<chem::Vec3> conformer(const std::string& smi) {
  return chem::CoarseEmbedder().generate(chem::parse_smiles(smi), smi);
}

TEST(MoleculeGraph, StructuralInvariants) {
  const std::string smi = "CC(=O)Nc1ccc(O)cc1";
  auto g = build_molecule_graph(chem::parse_smiles(smi), conformer(smi));
  auto edges = edge_set(g.edges);
  for (auto [s, d] : edges) {
    EXPECT_NE(s, d);
    EXPECT_TRUE(edges.contains({d, s}));
  }
  for (Eigen::Index e = 0; e < g.edge_vec.rows(); ++e) {
    EXPECT_NEAR(g.edge_vec.row(e).norm(), 1.0, 1e-6);
    for (Eigen::Index k = 0; k < g.edge_rbf.cols(); ++k) {
      EXPECT_GT(g.edge_rbf(e, k), 0.0);
      EXPECT_LE(g.edge_rbf(e, k), 1.0);
    }
  }
}

TEST(MoleculeGraph, RigidMotionInvariance) {
  const std::string smi = "OC(=O)c1ccccc1O";
  auto mol = chem::parse_smiles(smi);
  auto xyz = conformer(smi);
  Eigen::Matrix3d rot = (Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized())).toRotationMatrix();
  Eigen::Vector3d shift(4.0, -2.0, 9.5);
  std::vector<chem::Vec3> moved;
  for (const auto& p : xyz) {
    Eigen::Vector3d q = rot * Eigen::Vector3d(p[0], p[1], p[2]) + shift;
    moved.push_back({q(0), q(1), q(2)});
  }
  auto a = build_molecule_graph(mol, xyz);
  auto b = build_molecule_graph(mol, moved);
  EXPECT_EQ(a.edges, b.edges);
  EXPECT_LT((a.edge_rbf - b.edge_rbf).cwiseAbs().maxCoeff(), 1e-6);
  Matrix rotated = a.edge_vec * rot.transpose();
  EXPECT_LT((rotated - b.edge_vec).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(MoleculeGraph, InputAtomOrderDoesNotMatter) {
  const std::string smi = "CC(=O)Nc1ccc(O)cc1";
  auto mol = chem::parse_smiles(smi);
  auto xyz = conformer(smi);
  std::vector<int> perm(mol.num_atoms());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(perm.size() - 1 - i);
  std::vector<chem::Vec3> xyz_perm;
  for (int p : perm) xyz_perm.push_back(xyz[static_cast<std::size_t>(p)]);
  auto a = build_molecule_graph(mol, xyz);
  auto b = build_molecule_graph(mol.permuted(perm), xyz_perm);
  EXPECT_EQ(a.atom_scalar, b.atom_scalar);
  EXPECT_EQ(a.atom_coords, b.atom_coords);
  EXPECT_EQ(a.edges, b.edges);
}

TEST(Fingerprint, DeterministicAndSelfSimilar) {
  auto a = fingerprint("CC(=O)Oc1ccccc1C(=O)O");
  auto b = fingerprint("CC(=O)Oc1ccccc1C(=O)O");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 2048u);
  EXPECT_GT(a.count(), 0u);
  EXPECT_DOUBLE_EQ(tanimoto(a, a), 1.0);
  EXPECT_LT(tanimoto(a, fingerprint("CCN")), 0.5);
  // Same molecule written differently.
  EXPECT_EQ(fingerprint("OC(=O)c1ccccc1OC(C)=O"), a);
  EXPECT_THROW(fingerprint("C1CC"), chem::SmilesError);
}

TEST(Fingerprint, TanimotoEdgeCases) {
  BitVector x(64), y(64);
  x.set(1);
  x.set(5);
  y.set(2);
  EXPECT_DOUBLE_EQ(tanimoto(x, y), 0.0);
  EXPECT_DOUBLE_EQ(tanimoto(BitVector(64), BitVector(64)), 0.0);
  y.set(5);
  EXPECT_DOUBLE_EQ(tanimoto(x, y), 1.0 / 3.0);
}

TEST(Featurizer, CompoundFromConformerFile) {
  scope::testing::TempDir dir("conf");
  auto mol = chem::parse_smiles("CCO");
  write_file(dir / "m.sdf", chem::format_sdf(mol, {{0, 0, 0}, {1.5, 0, 0}, {2.0, 1.4, 0}}, "m"));
  core::CompoundRecord rec{"M", "CCO", (dir / "m.sdf").string()};
  auto f = featurize_compound(rec, nullptr);
  EXPECT_EQ(f.graph.num_atoms(), 3u);
  core::CompoundRecord no_geometry{"N", "CCO", std::nullopt};
  EXPECT_THROW(featurize_compound(no_geometry, nullptr), chem::ConformerError);
}

core::Corpus structured_corpus(const std::filesystem::path& dir) {
  core::Corpus c;
  Rng rng(3);
  for (int p = 0; p < 3; ++p) {
    const std::string seq = "MKVLAGHWY";
    Matrix xyz(static_cast<Eigen::Index>(seq.size()), 3);
    for (Eigen::Index i = 0; i < xyz.rows(); ++i) xyz.row(i) << 3.8 * i, rng.uniform(-1, 1), rng.uniform(-1, 1);
    const auto path = dir / fmt::format("p{}.pdb", p);
    write_file(path, scope::testing::ca_trace_pdb(seq, xyz));
    c.proteins[fmt::format("P{}", p)] = {fmt::format("P{}", p), seq, core::ProteinFamily::kOther, path.string()};
  }
  for (auto [id, smi] : {std::pair{"C0", "CCO"}, {"C1", "c1ccccc1O"}, {"C2", "CC(=O)N"}}) {
    c.compounds[id] = {id, smi, std::nullopt};
  }
  return c;
}

TEST(Featurizer, CorpusIsDeterministicAcrossWorkersAndCache) {
  scope::testing::TempDir dir("feat");
  auto corpus = structured_corpus(dir.path());
  chem::CoarseEmbedder embedder;
  FeatureCache cache(dir / "cache");
  auto serial = featurize_corpus(corpus, {.adapter = &embedder, .workers = 1});
  auto parallel = featurize_corpus(corpus, {.adapter = &embedder, .cache = &cache, .workers = 3});
  auto cached = featurize_corpus(corpus, {.adapter = &embedder, .cache = &cache, .workers = 2});
  for (const auto& [id, p] : corpus.proteins) {
    EXPECT_EQ(serialize_protein(serial.protein(id)), serialize_protein(parallel.protein(id)));
    EXPECT_EQ(serialize_protein(serial.protein(id)), serialize_protein(cached.protein(id)));
  }
  for (const auto& [id, c] : corpus.compounds) {
    EXPECT_EQ(serialize_compound(serial.compound(id)), serialize_compound(cached.compound(id)));
  }
  std::size_t blobs = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(cache.dir())) ++blobs;
  EXPECT_EQ(blobs, corpus.proteins.size() + corpus.compounds.size());
}

TEST(Featurizer, CorruptBlobIsIgnored) {
  scope::testing::TempDir dir("blob");
  FeatureCache cache(dir.path());
  write_file(dir / "deadbeef.bin", "SCPF garbage");
  EXPECT_FALSE(cache.load_protein("deadbeef").has_value());
  EXPECT_THROW(deserialize_compound("nope"), ParseError);
}

}  // namespace
}  // namespace scope::featurize
