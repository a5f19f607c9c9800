// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "scope/model/head.hpp"

namespace scope::model {

enum class Backbone { kBan, kMlp };

std::string_view backbone_name(Backbone b);
Backbone parse_backbone(std::string_view name);

struct ModelConfig {
  ProteinVariant protein = ProteinVariant::kHgnn3d;
  CompoundVariant compound = CompoundVariant::kGvp3dPooled;
  Backbone backbone = Backbone::kBan;
  EncoderConfig encoder;
  HeadConfig head;

  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);  // missing keys keep defaults
};

struct PairInput {
  const featurize::ProteinGraph* protein = nullptr;
  const featurize::CompoundFeatures* compound = nullptr;
};

// Full interaction model: protein encoder, compound encoder and either the
// bilinear attention head (BAN) or plain concatenation (MLP), followed by the
// decoder. Proteins and compounds repeated within a batch are encoded once.
class DtiModel {
 public:
  DtiModel(const ModelConfig& config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  ParamStore& params() { return store_; }
  const ParamStore& params() const { return store_; }

  Tensor logits(const std::vector<PairInput>& pairs, const Context& ctx) const;
  // Eval mode, no gradient recording; batches run on `workers` threads.
  std::vector<double> predict(const std::vector<PairInput>& pairs, std::size_t batch_size = 64,
                              unsigned workers = 1) const;

  // Encoder outputs for one pair in eval mode. Padding rows of the unpooled
  // compound variant are dropped.
  struct PairRows {
    Matrix drug;
    Matrix protein;
  };
  PairRows encode_pair(const PairInput& pair) const;
  bool has_attention() const { return ban_ != nullptr; }
  BanWeights ban_weights() const;  // InvalidArgument for the MLP backbone

  // Per-head attention maps for one pair (BAN only); rows are drug rows,
  // columns residues.
  std::vector<Matrix> attention(const PairInput& pair) const;

  // Single-file checkpoint: JSON manifest (config, metadata, tensor index,
  // format version) followed by raw little-endian doubles.
  static constexpr int kCheckpointVersion = 1;
  void save(const std::filesystem::path& path, const nlohmann::json& metadata = nlohmann::json::object()) const;
  static std::unique_ptr<DtiModel> load(const std::filesystem::path& path, nlohmann::json* metadata = nullptr);

 private:
  struct Encodings {
    Encoded drugs;
    Encoded proteins;
    std::vector<int> drug_of;
    std::vector<int> protein_of;
  };
  Encodings encode(const std::vector<PairInput>& pairs, const Context& ctx) const;

  ModelConfig config_;
  ParamStore store_;
  std::unique_ptr<ProteinEncoder> protein_encoder_;
  std::unique_ptr<CompoundEncoder> compound_encoder_;
  std::unique_ptr<BanHead> ban_;
  std::unique_ptr<Decoder> decoder_;
};

}  // namespace scope::model
