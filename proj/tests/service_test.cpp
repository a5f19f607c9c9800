// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "scope/chem/smiles.hpp"
#include "scope/featurize/featurizer.hpp"
#include "scope/service/api.hpp"
#include "scope/service/archive.hpp"
#include "scope/util/hash.hpp"
#include "service_fixtures.hpp"

// After Eigen: <resolv.h> defines a `_res` macro that breaks Eigen headers.
#include "httplib.h"

namespace scope::service {
namespace {

using nlohmann::json;

class ServiceTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    fixture = new testing::ServiceFixture();
    core = ServiceCore::open(fixture->config()).release();
  }
  static void TearDownTestSuite() {
    delete core;
    delete fixture;
  }
  static testing::ServiceFixture* fixture;
  static ServiceCore* core;
};

testing::ServiceFixture* ServiceTest::fixture = nullptr;
ServiceCore* ServiceTest::core = nullptr;

TEST(RankRows, SortsByScoreThenProteinId) {
  std::vector<PredictionRow> rows = {{"B", "Other", 0.5, {0.5}, 0}, {"A", "Other", 0.5, {0.5}, 0},
                                     {"C", "Other", 0.9, {0.9}, 0}, {"D", "Other", 0.1, {0.1}, 0}};
  rank_rows(rows);
  std::vector<std::string> order;
  for (const auto& r : rows) order.push_back(r.protein_id);
  EXPECT_EQ(order, (std::vector<std::string>{"C", "A", "B", "D"}));
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].rank, static_cast<int>(i + 1));
}

TEST(RankRows, InvariantUnderMonotoneTransform) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<PredictionRow> a;
    for (int i = 0; i < 30; ++i) {
      // Coarse grid so ties occur.
      const double s = std::round(rng.uniform() * 10) / 10;
      a.push_back({fmt::format("P{:02d}", (i * 7) % 30), "Other", s, {s}, 0});
    }
    auto b = a;
    for (auto& r : b) r.score = std::exp(3 * r.score) - 7;
    rank_rows(a);
    rank_rows(b);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i].protein_id, b[i].protein_id);
  }
}

TEST(Archive, TarRoundTripAndDeterminism) {
  const std::vector<std::pair<std::string, std::string>> files = {
      {"a/x.tsv", "h\n1\n"}, {"a/empty", ""}, {"a/big", std::string(1500, 'z')}};
  const auto tar = make_tar(files);
  EXPECT_EQ(tar.size() % 512, 0u);
  EXPECT_EQ(read_tar(tar), files);
  const auto gz = gzip_compress(tar);
  EXPECT_EQ(gz, gzip_compress(tar));
  ASSERT_GE(gz.size(), 10u);
  EXPECT_EQ(static_cast<unsigned char>(gz[0]), 0x1f);
  EXPECT_EQ(static_cast<unsigned char>(gz[1]), 0x8b);
  EXPECT_EQ(gz.substr(4, 4), std::string(4, '\0'));  // mtime
  EXPECT_EQ(gzip_decompress(gz), tar);
  EXPECT_THROW(gzip_decompress(gz.substr(0, gz.size() / 2)), ParseError);
}

TEST(Archive, HeaderChecksumMatchesUstarRule) {
  const auto tar = make_tar({{"f", "abc"}});
  unsigned sum = 0;
  for (std::size_t i = 0; i < 512; ++i) sum += (i >= 148 && i < 156) ? ' ' : static_cast<unsigned char>(tar[i]);
  EXPECT_EQ(std::stoul(tar.substr(148, 6), nullptr, 8), sum);
  EXPECT_EQ(tar.substr(257, 5), "ustar");
}

TEST(ServiceConfigTest, ParsesAndResolvesPaths) {
  testing::TempDir d("scope-cfg");
  write_file(d / "s.ini", "[service]\nport = 9001\ncorpus = data\ncheckpoints = a.ckpt, /abs/b.ckpt\nworkers = 3\n");
  const auto c = ServiceConfig::load(d / "s.ini");
  EXPECT_EQ(c.port, 9001);
  EXPECT_EQ(c.corpus_dir, d.path() / "data");
  ASSERT_EQ(c.checkpoints.size(), 2u);
  EXPECT_EQ(c.checkpoints[0], d.path() / "a.ckpt");
  EXPECT_EQ(c.checkpoints[1], std::filesystem::path("/abs/b.ckpt"));
  EXPECT_EQ(c.workers, 3u);
  write_file(d / "bad.ini", "[service]\ncorpus = x\nport = 70000\n");
  EXPECT_THROW(ServiceConfig::load(d / "bad.ini"), ParseError);
  write_file(d / "none.ini", "[service]\nport = 80\n");
  EXPECT_THROW(ServiceConfig::load(d / "none.ini"), ParseError);
}

TEST_F(ServiceTest, BoundaryPairIsExactlyPointNine) {
  EXPECT_EQ(featurize::tanimoto(featurize::fingerprint(testing::kBoundaryA), featurize::fingerprint(testing::kBoundaryB)),
            0.9);
}

TEST_F(ServiceTest, SearchMatchesBruteForce) {
  for (const auto& [qid, q] : fixture->corpus.compounds) {
    const auto fq = featurize::fingerprint(q.smiles);
    std::vector<std::string> want;
    for (const auto& [cid, c] : fixture->corpus.compounds) {
      if (featurize::tanimoto(fq, featurize::fingerprint(c.smiles)) > 0.9) want.push_back(cid);
    }
    auto hits = core->similarity_search(q.smiles);
    std::vector<std::string> got;
    for (const auto& h : hits) {
      got.push_back(h.compound_id);
      EXPECT_GT(h.similarity, 0.9);
    }
    EXPECT_TRUE(std::is_sorted(hits.begin(), hits.end(),
                               [](const SearchHit& a, const SearchHit& b) { return a.similarity > b.similarity; }));
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, want) << q.smiles;
    ASSERT_FALSE(hits.empty());
    EXPECT_EQ(hits[0].similarity, 1.0);
  }
}

TEST_F(ServiceTest, SearchExcludesExactBoundary) {
  const auto hits = core->similarity_search(testing::kBoundaryA);
  for (const auto& h : hits) EXPECT_NE(h.smiles, testing::kBoundaryB);
}

TEST_F(ServiceTest, SearchDisjointQueryIsEmpty) { EXPECT_TRUE(core->similarity_search("[Xe]").empty()); }

TEST_F(ServiceTest, SearchHomologGivesGraded) {
  const auto hits = core->similarity_search("C(=O)OCCCCc1ccccc1");
  ASSERT_GE(hits.size(), 2u);
  EXPECT_EQ(hits[0].smiles, "C(=O)OCCCCc1ccccc1");
  EXPECT_LT(hits[1].similarity, 1.0);
}

TEST_F(ServiceTest, InvalidSmilesIsClientError) {
  EXPECT_THROW(core->similarity_search("C1CC"), ClientError);
  EXPECT_THROW(core->predict_targets("C(("), ClientError);
  EXPECT_THROW(core->similarity_search("   "), ClientError);
}

TEST_F(ServiceTest, PredictMatchesDirectModelEvaluation) {
  const std::string q = "CC(=O)Nc1ccc(O)cc1";
  const auto rows = core->predict_targets(q);
  ASSERT_EQ(rows.size(), fixture->corpus.proteins.size());
  const chem::CoarseEmbedder embedder;
  const auto compound = featurize::featurize_compound({"q", q, std::nullopt}, &embedder);
  std::vector<std::unique_ptr<model::DtiModel>> models;
  for (const auto& path : fixture->checkpoints) models.push_back(model::DtiModel::load(path));
  const auto read = core::read_corpus(fixture->corpus_dir());
  for (const auto& row : rows) {
    const auto graph = featurize::featurize_protein(read.proteins.at(row.protein_id));
    ASSERT_EQ(row.per_model_scores.size(), 2u);
    for (std::size_t m = 0; m < models.size(); ++m) {
      EXPECT_EQ(row.per_model_scores[m], models[m]->predict({{&graph, &compound}})[0]);
    }
    EXPECT_DOUBLE_EQ(row.score, (row.per_model_scores[0] + row.per_model_scores[1]) / 2);
    EXPECT_EQ(row.family, std::string(core::family_name(read.proteins.at(row.protein_id).family)));
  }
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(rows[i - 1].score, rows[i].score);
}

TEST_F(ServiceTest, PredictTopKAndDeterminism) {
  const auto all = core->predict_targets("NCCc1ccc(O)c(O)c1");
  const auto top = core->predict_targets("NCCc1ccc(O)c(O)c1", 5);
  ASSERT_EQ(top.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(top[i].protein_id, all[i].protein_id);
    EXPECT_EQ(top[i].rank, static_cast<int>(i + 1));
  }
  EXPECT_EQ(core->predict_payload("NCCc1ccc(O)c(O)c1", 5), core->predict_payload("NCCc1ccc(O)c(O)c1", 5));
  EXPECT_EQ(core->predict_targets("NCCc1ccc(O)c(O)c1", 100).size(), all.size());
  EXPECT_THROW(core->predict_targets("CCO", 0), ClientError);
}

TEST_F(ServiceTest, SingleCheckpointMeanIsThatScore) {
  auto cfg = fixture->config();
  cfg.checkpoints.resize(1);
  const auto single = ServiceCore::open(cfg);
  for (const auto& r : single->predict_targets("CCCCCCCCCCO")) {
    ASSERT_EQ(r.per_model_scores.size(), 1u);
    EXPECT_EQ(r.score, r.per_model_scores[0]);
  }
}

TEST_F(ServiceTest, PredictWithoutCheckpointIsInternalError) {
  auto cfg = fixture->config();
  cfg.checkpoints.clear();
  const auto bare = ServiceCore::open(cfg);
  EXPECT_THROW(bare->predict_targets("CCO"), InvalidArgument);
  const auto r = handle_request(*bare, "POST", "/api/predict", R"({"smiles": "CCO"})");
  EXPECT_EQ(r.status, 500);
  const auto body = json::parse(r.body);
  EXPECT_EQ(body["error"]["code"], "internal");
  EXPECT_EQ(body["error"]["id"].get<std::string>().size(), 16u);
  EXPECT_EQ(r.body.find("checkpoint"), std::string::npos);  // details stay in the log
}

std::vector<std::pair<std::string, std::string>> unpack(const std::string& gz) { return read_tar(gzip_decompress(gz)); }

std::string member(const std::vector<std::pair<std::string, std::string>>& files, const std::string& name) {
  for (const auto& [n, d] : files) {
    if (n == name) return d;
  }
  return {};
}

TEST_F(ServiceTest, ExportWholeCorpus) {
  const auto files = unpack(core->export_dataset());
  const auto inter = core::parse_interactions(member(files, "scope/interactions.tsv"));
  EXPECT_EQ(inter.size(), fixture->corpus.interactions.size());
  EXPECT_EQ(core::parse_proteins(member(files, "scope/proteins.tsv")).size(), 12u);
  const auto manifest = json::parse(member(files, "scope/manifest.json"));
  EXPECT_EQ(manifest["format_version"], kExportFormatVersion);
  EXPECT_EQ(manifest["stats"]["n_interactions"], fixture->corpus.interactions.size());
  EXPECT_EQ(manifest["source_corpus_hash"], core->corpus_hash());
}

TEST_F(ServiceTest, ExportFamilyFilter) {
  const auto files = unpack(core->export_dataset({"Kinase", std::nullopt}));
  const auto proteins = core::parse_proteins(member(files, "scope/proteins.tsv"));
  const auto inter = core::parse_interactions(member(files, "scope/interactions.tsv"));
  std::size_t want = 0;
  for (const auto& r : fixture->corpus.interactions) {
    want += fixture->corpus.proteins.at(r.protein_id).family == core::ProteinFamily::kKinase ? 1 : 0;
  }
  EXPECT_EQ(inter.size(), want);
  for (const auto& r : inter) EXPECT_EQ(proteins.at(r.protein_id).family, core::ProteinFamily::kKinase);
}

TEST_F(ServiceTest, ReExportIsByteIdentical) {
  EXPECT_EQ(sha256_hex(core->export_dataset()), sha256_hex(core->export_dataset()));
  const auto reopened = ServiceCore::open(fixture->config());
  EXPECT_EQ(sha256_hex(reopened->export_dataset({"GPCR", std::nullopt})),
            sha256_hex(core->export_dataset({"GPCR", std::nullopt})));
}

TEST_F(ServiceTest, ExportRejectsUnknownFilters) {
  EXPECT_THROW(core->export_dataset({"Protease", std::nullopt}), ClientError);
  EXPECT_THROW(core->export_dataset({std::nullopt, "test"}), ClientError);  // no manifest loaded
}

TEST_F(ServiceTest, HealthReportsCorpusHash) {
  const auto r = handle_request(*core, "GET", "/api/health", "");
  EXPECT_EQ(r.status, 200);
  const auto body = json::parse(r.body);
  EXPECT_EQ(body["corpus_hash"], core->corpus_hash());
  EXPECT_EQ(body["version"], kServiceVersion);
  EXPECT_EQ(body["n_models"], 2);
}

TEST_F(ServiceTest, RoutesAndErrors) {
  const auto search = handle_request(*core, "POST", "/api/search", R"({"smiles": "CCCCCCCCCCO"})");
  EXPECT_EQ(search.status, 200);
  EXPECT_EQ(search.body, render(core->search_payload("CCCCCCCCCCO")));
  EXPECT_EQ(handle_request(*core, "POST", "/api/v1/search", R"({"smiles": "CCCCCCCCCCO"})").body, search.body);

  const auto bad_smiles = handle_request(*core, "POST", "/api/predict", R"({"smiles": "C1CC"})");
  EXPECT_EQ(bad_smiles.status, 400);
  EXPECT_EQ(json::parse(bad_smiles.body)["error"]["code"], "invalid_smiles");
  EXPECT_NE(json::parse(bad_smiles.body)["error"]["message"].get<std::string>().find("invalid SMILES"), std::string::npos);

  EXPECT_EQ(handle_request(*core, "POST", "/api/search", "{not json").status, 400);
  EXPECT_EQ(json::parse(handle_request(*core, "POST", "/api/search", "{not json").body)["error"]["code"], "malformed_json");
  EXPECT_EQ(handle_request(*core, "POST", "/api/search", "[1]").status, 400);
  EXPECT_EQ(handle_request(*core, "POST", "/api/search", R"({"query": "CCO"})").status, 400);
  EXPECT_EQ(handle_request(*core, "POST", "/api/predict", R"({"smiles": "CCO", "top_k": -2})").status, 400);
  EXPECT_EQ(handle_request(*core, "GET", "/api/search", "").status, 405);
  EXPECT_EQ(handle_request(*core, "GET", "/api/nothing", "").status, 404);

  const auto predict = handle_request(*core, "POST", "/api/v1/predict", R"({"smiles": "CCO", "top_k": 10})");
  EXPECT_EQ(predict.status, 200);
  EXPECT_EQ(json::parse(predict.body)["rows"].size(), 10u);

  const auto dataset = handle_request(*core, "GET", "/api/dataset", "", {{"family", "Kinase"}});
  EXPECT_EQ(dataset.status, 200);
  EXPECT_EQ(dataset.content_type, "application/gzip");
  EXPECT_EQ(dataset.body, core->export_dataset({"Kinase", std::nullopt}));
  EXPECT_EQ(handle_request(*core, "GET", "/api/dataset", "", {{"family", "Nope"}}).status, 400);
}

TEST_F(ServiceTest, LiveServerServesSamePayloads) {
  auto cfg = fixture->config();
  cfg.port = 0;
  ApiServer server(*core, cfg);
  const int port = server.start();
  httplib::Client client("127.0.0.1", port);
  const auto res = client.Post("/api/v1/search", R"({"smiles": "C(=O)OCCCCCc1ccccc1"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, render(core->search_payload("C(=O)OCCCCCc1ccccc1")));
  const auto health = client.Get("/api/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  const auto bad = client.Post("/api/predict", "{", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  server.stop();
}

}  // namespace
}  // namespace scope::service
