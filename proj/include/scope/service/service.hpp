// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "scope/balance/split.hpp"
#include "scope/chem/conformer.hpp"
#include "scope/core/types.hpp"
#include "scope/featurize/featurizer.hpp"
#include "scope/model/model.hpp"
#include "scope/util/error.hpp"

namespace scope::service {

inline constexpr const char* kServiceVersion = "0.1.0";
inline constexpr const char* kApiVersion = "v1";
inline constexpr int kExportFormatVersion = 1;
// Hits must be strictly more similar than this.
inline constexpr double kSimilarityThreshold = 0.9;

// Caller mistake (bad SMILES, unknown filter, malformed request); maps to 400.
class ClientError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// The query compound could not be given coordinates; maps to 422.
class ConformerStageError : public Error {
 public:
  using Error::Error;
};

struct SearchHit {
  std::string compound_id;
  std::string smiles;
  double similarity = 0.0;
  nlohmann::json to_json() const;
};

struct PredictionRow {
  std::string protein_id;
  std::string family;
  double score = 0.0;  // mean of per_model_scores
  std::vector<double> per_model_scores;
  int rank = 0;
  nlohmann::json to_json() const;
};

// Sorts by score descending, ties by protein_id, and assigns ranks 1..n.
void rank_rows(std::vector<PredictionRow>& rows);

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path corpus_dir;
  std::vector<std::filesystem::path> checkpoints;
  std::optional<std::filesystem::path> split_manifest;
  std::optional<std::filesystem::path> feature_cache;
  std::optional<std::filesystem::path> static_dir;  // served at / when set
  std::string conformer = "coarse";
  unsigned workers = 1;

  // INI file, section [service]: host, port, corpus, checkpoints
  // (comma-separated), split_manifest, feature_cache, static_dir, conformer,
  // workers. Relative paths resolve against the file's directory.
  static ServiceConfig load(const std::filesystem::path& path);
};

struct ExportFilter {
  std::optional<std::string> family;
  std::optional<std::string> split;
};

// Read-only state shared by the HTTP handlers and the CLI: corpus, compound
// fingerprint index, featurized protein library and loaded checkpoints.
class ServiceCore {
 public:
  struct Parts {
    core::Corpus corpus;
    std::vector<std::unique_ptr<model::DtiModel>> models;
    std::unique_ptr<chem::ConformerAdapter> adapter;
    std::optional<balance::SplitManifest> manifest;
    featurize::FeaturizeOptions options;
    const featurize::FeatureCache* cache = nullptr;
    unsigned workers = 1;
  };
  explicit ServiceCore(Parts parts);
  static std::unique_ptr<ServiceCore> open(const ServiceConfig& config);

  std::vector<SearchHit> similarity_search(const std::string& smiles) const;
  // Throws InvalidArgument when no checkpoint is loaded.
  std::vector<PredictionRow> predict_targets(const std::string& smiles, std::optional<std::size_t> top_k = {}) const;
  // gzip-compressed ustar with interactions/proteins/compounds TSVs and
  // manifest.json.
  std::string export_dataset(const ExportFilter& filter = {}) const;

  // Response payloads shared by the API and the CLI.
  nlohmann::json search_payload(const std::string& smiles) const;
  nlohmann::json predict_payload(const std::string& smiles, std::optional<std::size_t> top_k) const;
  nlohmann::json health_payload() const;

  const core::Corpus& corpus() const { return corpus_; }
  const std::string& corpus_hash() const { return corpus_hash_; }
  std::size_t n_models() const { return models_.size(); }

 private:
  core::Corpus corpus_;
  std::string corpus_hash_;
  std::vector<std::unique_ptr<model::DtiModel>> models_;
  std::unique_ptr<chem::ConformerAdapter> adapter_;
  std::optional<balance::SplitManifest> manifest_;
  featurize::FeaturizeOptions options_;
  unsigned workers_;
  std::vector<std::string> compound_ids_;
  std::vector<featurize::BitVector> fingerprints_;
  std::vector<std::string> protein_ids_;
  std::vector<featurize::ProteinGraph> library_;
};

// Canonical text form of a payload, used byte-for-byte by both surfaces.
std::string render(const nlohmann::json& payload);

}  // namespace scope::service
