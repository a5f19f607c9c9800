// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "interpret_fixtures.hpp"
#include "scope/interpret/interpret.hpp"
#include "scope/util/text.hpp"
#include "train_fixtures.hpp"

namespace scope::interpret {
namespace {

using testing::two_blobs;

TEST(Umap, FitAbMatchesReferenceCurve) {
  const auto [a, b] = fit_ab(1.0, 0.1);
  EXPECT_NEAR(a, 1.577, 5e-3);
  EXPECT_NEAR(b, 0.895, 5e-3);
}

TEST(Umap, DeterministicAndFinite) {
  const auto blobs = two_blobs(30, 20, 5);
  Matrix x(60, 20);
  for (int i = 0; i < 60; ++i) x.row(i) = blobs.vectors[static_cast<std::size_t>(i)];
  UmapParams p;
  p.n_epochs = 100;
  const Matrix e1 = umap_embed(x, p);
  const Matrix e2 = umap_embed(x, p);
  ASSERT_EQ(e1.rows(), 60);
  ASSERT_EQ(e1.cols(), 2);
  EXPECT_TRUE(e1.allFinite());
  EXPECT_EQ(e1, e2);
}

TEST(Optics, MatchesReferenceImplementation) {
  const TsvTable t = read_tsv(std::filesystem::path(SCOPE_FIXTURE_DIR) / "optics_oracle.tsv");
  const auto n = static_cast<Eigen::Index>(t.rows.size());
  Matrix x(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = *parse_double(t.rows[static_cast<std::size_t>(i)][0]);
    x(i, 1) = *parse_double(t.rows[static_cast<std::size_t>(i)][1]);
  }
  struct Case {
    int min_samples;
    double xi;
    const char* column;
  };
  for (const Case c : {Case{5, 0.05, "label_5_0.05"}, Case{3, 0.1, "label_3_0.1"}, Case{8, 0.05, "label_8_0.05"}}) {
    OpticsParams p;
    p.min_samples = c.min_samples;
    p.xi = c.xi;
    p.min_cluster_size = 0.0;
    const OpticsResult r = optics(x, p);
    const std::size_t col = t.require_column(c.column);
    for (Eigen::Index i = 0; i < n; ++i) {
      EXPECT_EQ(r.labels[static_cast<std::size_t>(i)], *parse_int(t.rows[static_cast<std::size_t>(i)][col]))
          << c.column << " sample " << i;
    }
    if (c.min_samples != 5) continue;
    const std::size_t reach = t.require_column("reach_5");
    const std::size_t order = t.require_column("order_5");
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = t.rows[static_cast<std::size_t>(i)];
      EXPECT_EQ(r.ordering[static_cast<std::size_t>(i)], *parse_int(row[order]));
      const double want = row[reach] == "inf" ? INFINITY : *parse_double(row[reach]);
      if (std::isinf(want)) {
        EXPECT_TRUE(std::isinf(r.reachability[static_cast<std::size_t>(i)]));
      } else {
        EXPECT_NEAR(r.reachability[static_cast<std::size_t>(i)], want, 1e-12);
      }
    }
  }
}

TEST(Optics, TooFewPointsAreNoise) {
  Matrix x(3, 2);
  x << 0, 0, 0, 1, 1, 0;
  const auto r = optics(x);
  EXPECT_EQ(r.labels, (std::vector<int>{-1, -1, -1}));
}

TEST(ClusterProtein, TwoBlobsGiveTwoPureClusters) {
  const auto blobs = two_blobs(100, 40, 11);
  const ClusterAssignment a = cluster_protein(blobs.vectors);
  EXPECT_EQ(a.n_clusters, 2);
  EXPECT_GE(cluster_purity(a.cluster, blobs.truth), 0.95);
  EXPECT_LT(noise_fraction(a.cluster), 0.3);
  EXPECT_TRUE(a.warning.empty());
}

TEST(ClusterProtein, IdenticalVectorsFormOneCluster) {
  RowVector v(8);
  v << 1, 2, 3, 4, 0, 0, 1, 1;
  const std::vector<RowVector> same(12, v);
  const auto a = cluster_protein(same);
  EXPECT_EQ(a.n_clusters, 1);
  EXPECT_EQ(std::set<int>(a.cluster.begin(), a.cluster.end()), std::set<int>{0});
}

TEST(ClusterProtein, TooFewVectorsAreNoiseWithWarning) {
  const auto blobs = two_blobs(2, 10, 3);
  std::vector<RowVector> three(blobs.vectors.begin(), blobs.vectors.begin() + 3);
  const auto a = cluster_protein(three);
  EXPECT_EQ(a.cluster, (std::vector<int>{-1, -1, -1}));
  EXPECT_EQ(a.n_clusters, 0);
  EXPECT_FALSE(a.warning.empty());
}

TEST(ClusterProtein, ScaleOfEachVectorDoesNotMatter) {
  auto blobs = two_blobs(30, 20, 8);
  const auto a = cluster_protein(blobs.vectors);
  // Powers of two keep the normalised vectors bit-identical.
  for (std::size_t i = 0; i < blobs.vectors.size(); ++i) blobs.vectors[i] *= std::ldexp(1.0, static_cast<int>(i % 7));
  const auto b = cluster_protein(blobs.vectors);
  EXPECT_EQ(a.cluster, b.cluster);
}

TEST(ClusterProtein, DeterministicUnderSeed) {
  const auto blobs = two_blobs(40, 30, 9);
  const auto a = cluster_protein(blobs.vectors);
  const auto b = cluster_protein(blobs.vectors);
  EXPECT_EQ(a.cluster, b.cluster);
  EXPECT_EQ(a.coords, b.coords);
}

TEST(ClusterPurity, IgnoresNoisePoints) {
  EXPECT_DOUBLE_EQ(cluster_purity({0, 0, 1, 1}, {5, 5, 7, 7}), 1.0);
  EXPECT_DOUBLE_EQ(cluster_purity({0, 0, 0, -1}, {1, 1, 2, 2}), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(cluster_purity({-1, -1}, {1, 2}), 0.0);
  EXPECT_DOUBLE_EQ(noise_fraction({0, -1, 1, -1}), 0.5);
}

TEST(ClusterProtein, LeafClustersFragmentBlobsWithoutMinimumSize) {
  const auto blobs = two_blobs(100, 40, 11);
  OpticsParams o;
  o.min_cluster_size = 0.0;
  EXPECT_GT(cluster_protein(blobs.vectors, {}, o).n_clusters, 2);
}

// Five proteins, threshold 0.5. Hand tally:
//   A n_known 2: scores .9/1 .2/0 .6/0 -> 2 of 3 correct
//   B n_known 3: .8/1 .7/1          -> 1.0
//   C n_known 10: .4/1 .1/0 .3/0 .9/0 -> 2 of 4 = 0.5
//   D n_known 12: .6/1               -> 1.0
//   E n_known 40: .2/1 .7/0          -> 0.0
// Bins [0,5): {2/3, 1} mean 5/6; [5,20): {0.5, 1} mean 0.75; [20,inf): {0}.
TEST(AccuracyVsCount, MatchesHandComputedGroupMeans) {
  const std::vector<std::string> ids = {"A", "A", "A", "B", "B", "C", "C", "C", "C", "D", "E", "E"};
  const std::vector<double> scores = {.9, .2, .6, .8, .7, .4, .1, .3, .9, .6, .2, .7};
  const std::vector<int> labels = {1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 0};
  const std::map<std::string, int> known = {{"A", 2}, {"B", 3}, {"C", 10}, {"D", 12}, {"E", 40}, {"F", 7}};
  const auto curve = accuracy_vs_count(ids, scores, labels, known, 0.5, {0, 5, 20});
  ASSERT_EQ(curve.points.size(), 5u);  // F has no test pairs
  EXPECT_EQ(curve.points[0].protein_id, "A");
  EXPECT_NEAR(curve.points[0].accuracy, 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(curve.points[1].accuracy, 1.0);
  ASSERT_EQ(curve.bins.size(), 3u);
  EXPECT_NEAR(curve.bins[0].mean, 5.0 / 6.0, 1e-12);
  EXPECT_EQ(curve.bins[0].n, 2);
  EXPECT_NEAR(curve.bins[0].std, std::sqrt(2 * std::pow(1.0 / 6.0, 2)), 1e-12);
  EXPECT_NEAR(curve.bins[1].mean, 0.75, 1e-12);
  EXPECT_DOUBLE_EQ(curve.bins[1].min, 0.5);
  EXPECT_DOUBLE_EQ(curve.bins[1].max, 1.0);
  EXPECT_EQ(curve.bins[2].n, 1);
  EXPECT_DOUBLE_EQ(curve.bins[2].mean, 0.0);
  EXPECT_DOUBLE_EQ(curve.bins[2].std, 0.0);
  EXPECT_TRUE(std::isinf(curve.bins[2].hi));
}

TEST(AccuracyVsCount, PerfectProteinScoresOne) {
  const auto curve = accuracy_vs_count({"P", "P"}, {0.9, 0.1}, {1, 0}, {{"P", 4}}, 0.5, {0});
  ASSERT_EQ(curve.points.size(), 1u);
  EXPECT_DOUBLE_EQ(curve.points[0].accuracy, 1.0);
}

class AttentionExport : public ::testing::Test {
 protected:
  testing::SeparableCorpus corpus;
};

TEST_F(AttentionExport, ResidueProfileShapeAndSign) {
  // Attention is non-negative under ReLU once the head weights q are.
  model::DtiModel m(testing::tiny_config(), 4);
  auto q = m.params().param("head.ban.q");
  q.mutable_value() = q.value().cwiseAbs();
  const auto pairs = corpus.pairs(0, 2);
  const auto vecs = extract_attention(m, pairs);
  ASSERT_EQ(vecs.size(), pairs.size());
  const auto p = m.predict(pairs.inputs);
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    EXPECT_EQ(vecs[i].vector.size(), pairs.inputs[i].protein->residue_types.size());
    EXPECT_GE(vecs[i].vector.minCoeff(), 0.0);
    EXPECT_DOUBLE_EQ(vecs[i].predicted_p, p[i]);
    EXPECT_EQ(vecs[i].label, pairs.labels[i]);
  }
}

TEST_F(AttentionExport, ProfileIsMeanOfAttentionRowsAndHeads) {
  const model::DtiModel m(testing::tiny_config(), 6);
  const auto pairs = corpus.pairs(0, 1);
  const auto vecs = extract_attention(m, pairs);
  const auto maps = m.attention(pairs.inputs[0]);
  RowVector want = RowVector::Zero(maps[0].cols());
  for (const auto& map : maps) {
    for (Eigen::Index r = 0; r < map.rows(); ++r) want += map.row(r);
  }
  want /= static_cast<double>(maps.size() * static_cast<std::size_t>(maps[0].rows()));
  EXPECT_LT((vecs[0].vector - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST_F(AttentionExport, ZeroHeadWeightsGiveZeroProfile) {
  model::DtiModel m(testing::tiny_config(), 6);
  m.params().param("head.ban.q").mutable_value().setZero();
  const auto vecs = extract_attention(m, corpus.pairs(0, 1));
  EXPECT_EQ(vecs[0].vector.cwiseAbs().maxCoeff(), 0.0);
}

TEST_F(AttentionExport, AlternateEmbeddingsHaveHeadWidths) {
  const auto cfg = testing::tiny_config();
  const model::DtiModel m(cfg, 6);
  const auto pairs = corpus.pairs(0, 1);
  EXPECT_EQ(extract_attention(m, pairs, EmbeddingKind::kJoint)[0].vector.size(), cfg.head.latent);
  EXPECT_EQ(extract_attention(m, pairs, EmbeddingKind::kPooled)[0].vector.size(), cfg.head.latent / cfg.head.pool);
}

TEST_F(AttentionExport, InvariantUnderRigidMotionOfCompound) {
  const model::DtiModel m(testing::tiny_config(), 8);
  const auto pairs = corpus.pairs(0, 1);
  const auto base = extract_attention(m, pairs);
  const auto moved_c = testing::moved(*pairs.inputs[0].compound, testing::some_rotation(0.7), {3.0, -2.0, 9.0});
  train::PairSet moved_pairs;
  moved_pairs.add(pairs.protein_ids[0], pairs.compound_ids[0], {pairs.inputs[0].protein, &moved_c}, pairs.labels[0]);
  const auto after = extract_attention(m, moved_pairs);
  EXPECT_LT((after[0].vector - base[0].vector).cwiseAbs().maxCoeff(), 1e-5);
}

TEST_F(AttentionExport, MlpBackboneIsRejected) {
  auto cfg = testing::tiny_config();
  cfg.backbone = model::Backbone::kMlp;
  const model::DtiModel m(cfg, 1);
  EXPECT_THROW(extract_attention(m, corpus.pairs(0, 1)), InvalidArgument);
}

TEST(Embedding, NamesRoundTrip) {
  for (auto k : {EmbeddingKind::kResidueProfile, EmbeddingKind::kJoint, EmbeddingKind::kPooled}) {
    EXPECT_EQ(parse_embedding(embedding_name(k)), k);
  }
  EXPECT_THROW(parse_embedding("f"), InvalidArgument);
}

TEST(Outputs, TsvColumns) {
  const auto dir = std::filesystem::temp_directory_path() / "scope_interpret_test";
  std::filesystem::create_directories(dir);
  AttentionVector v{"P", "C1", RowVector::Ones(3), 0.25, 1};
  ClusterAssignment a;
  a.cluster = {-1};
  a.coords = Matrix::Zero(1, 2);
  write_cluster_tsv(dir / "c.tsv", {v}, a);
  const auto t = read_tsv(dir / "c.tsv");
  EXPECT_EQ(t.header, (std::vector<std::string>{"compound_id", "cluster", "x", "y", "predicted_p", "label"}));
  EXPECT_EQ(t.rows[0][1], "-1");
  write_cluster_svg(dir / "c.svg", "P", a);
  EXPECT_NE(read_file(dir / "c.svg").find("<svg"), std::string::npos);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace scope::interpret
