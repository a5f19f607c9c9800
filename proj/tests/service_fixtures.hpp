// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "model_fixtures.hpp"
#include "scope/core/corpus_io.hpp"
#include "scope/service/service.hpp"
#include "test_util.hpp"

namespace scope::testing {

// Tanimoto of this pair under the repo fingerprint is exactly 0.9.
inline constexpr const char* kBoundaryA = "c1ccncc1CCCOC";
inline constexpr const char* kBoundaryB = "c1ccncc1CCCCOC";

inline std::vector<std::string> service_compound_smiles() {
  return {kBoundaryB,
          "C(=O)OCCCCc1ccccc1",
          "C(=O)OCCCCCc1ccccc1",
          "C(=O)OCCCCCCc1ccccc1",
          "CCCCCCCCCCO",
          "CCCCCCCCCCCO",
          "CCCCCCCCCCCCO",
          "c1ccccc1O",
          "CC(=O)Nc1ccc(O)cc1",
          "CC(=O)Oc1ccccc1C(=O)O",
          "CN1C=NC2=C1C(=O)N(C)C(=O)N2C",
          "C1CCNCC1",
          "OCC(O)CO",
          "ClCCCl",
          "c1ccc2ccccc2c1",
          "CC(C)Cc1ccc(C(C)C(=O)O)cc1",
          "NCCc1ccc(O)c(O)c1",
          "C#N",
          "FC(F)(F)c1ccccc1",
          "CCOC(=O)C"};
}

// Corpus directory with 12 proteins (CA-trace PDB files, mixed families), 20
// compounds and seeded labels, plus two tiny-model checkpoints.
struct ServiceFixture {
  TempDir dir{"scope-service"};
  core::Corpus corpus;
  std::vector<std::filesystem::path> checkpoints;

  ServiceFixture() {
    Rng rng(2024);
    const core::ProteinFamily families[] = {core::ProteinFamily::kKinase, core::ProteinFamily::kGpcr,
                                            core::ProteinFamily::kIonChannel, core::ProteinFamily::kOther};
    const std::string alphabet(core::kResidueAlphabet);
    std::filesystem::create_directories(dir / "structures");
    for (int p = 0; p < 12; ++p) {
      const std::string id = fmt::format("P{:03d}", p);
      std::string seq;
      const auto len = 14 + rng.uniform_index(14);
      for (std::size_t i = 0; i < len; ++i) seq += alphabet[rng.uniform_index(20)];
      Matrix xyz(static_cast<Eigen::Index>(len), 3);
      for (Eigen::Index i = 0; i < xyz.rows(); ++i) {
        xyz.row(i) << 3.8 * static_cast<double>(i) * 0.6, rng.uniform(-3, 3), rng.uniform(-3, 3);
      }
      const auto pdb = dir / "structures" / (id + ".pdb");
      write_file(pdb, ca_trace_pdb(seq, xyz));
      corpus.proteins[id] = {id, seq, families[p % 4], "structures/" + id + ".pdb"};
    }
    const auto smiles = service_compound_smiles();
    for (std::size_t c = 0; c < smiles.size(); ++c) {
      const std::string id = fmt::format("C{:03d}", c);
      corpus.compounds[id] = {id, smiles[c], std::nullopt};
    }
    for (const auto& [pid, p] : corpus.proteins) {
      for (const auto& [cid, c] : corpus.compounds) {
        if (rng.uniform() < 0.4) corpus.interactions.push_back(interaction(pid, cid, rng.uniform() < 0.5 ? 1 : 0));
      }
    }
    core::sort_interactions(corpus.interactions);
    core::write_corpus(corpus, dir.path() / "corpus");
    std::filesystem::rename(dir / "structures", dir.path() / "corpus" / "structures");
    for (std::uint64_t seed : {11u, 12u}) {
      model::DtiModel m(tiny_config(), seed);
      const auto path = dir.path() / fmt::format("model{}.ckpt", seed);
      m.save(path, {{"seed", seed}});
      checkpoints.push_back(path);
    }
    write_file(dir / "service.ini", fmt::format("[service]\nport = 8080\ncorpus = corpus\ncheckpoints = {}, {}\n",
                                                checkpoints[0].filename().string(), checkpoints[1].filename().string()));
  }

  std::filesystem::path corpus_dir() const { return dir.path() / "corpus"; }
  std::filesystem::path config_path() const { return dir / "service.ini"; }

  service::ServiceConfig config() const { return service::ServiceConfig::load(config_path()); }
};

}  // namespace scope::testing
