// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "scope/chem/conformer.hpp"
#include "scope/core/types.hpp"
#include "scope/featurize/fingerprint.hpp"
#include "scope/featurize/graphs.hpp"

namespace scope::featurize {

struct FeaturizeOptions {
  double protein_radius = 10.0;
  std::size_t max_sequence_length = core::kDefaultMaxSequenceLength;
  MoleculeGraphOptions molecule;
  int fingerprint_radius = 2;
  std::size_t fingerprint_bits = 2048;
};

struct CompoundFeatures {
  MoleculeGraph graph;
  BitVector fingerprint;
};

ProteinGraph featurize_protein(const core::ProteinRecord& protein, const FeaturizeOptions& options = {});

// Coordinates come from the compound's conformer file when present,
// otherwise from `adapter`; with neither, throws chem::ConformerError.
CompoundFeatures featurize_compound(const core::CompoundRecord& compound,
                                    const chem::ConformerAdapter* adapter,
                                    const FeaturizeOptions& options = {});

// On-disk cache, one binary blob per entity named by the SHA-256 of the
// entity's inputs and the format version.
class FeatureCache {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  explicit FeatureCache(std::filesystem::path dir);

  std::string protein_key(const core::ProteinRecord& protein, const FeaturizeOptions& options) const;
  std::string compound_key(const core::CompoundRecord& compound, const chem::ConformerAdapter* adapter,
                           const FeaturizeOptions& options) const;

  std::optional<ProteinGraph> load_protein(const std::string& key) const;
  void store_protein(const std::string& key, const ProteinGraph& graph) const;
  std::optional<CompoundFeatures> load_compound(const std::string& key) const;
  void store_compound(const std::string& key, const CompoundFeatures& features) const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

std::string serialize_protein(const ProteinGraph& graph);
ProteinGraph deserialize_protein(std::string_view blob);
std::string serialize_compound(const CompoundFeatures& features);
CompoundFeatures deserialize_compound(std::string_view blob);

struct FeatureStore {
  std::map<std::string, std::shared_ptr<const ProteinGraph>> proteins;
  std::map<std::string, std::shared_ptr<const CompoundFeatures>> compounds;

  const ProteinGraph& protein(const std::string& id) const;
  const CompoundFeatures& compound(const std::string& id) const;
};

struct FeaturizeRun {
  const chem::ConformerAdapter* adapter = nullptr;
  const FeatureCache* cache = nullptr;
  unsigned workers = 1;
  FeaturizeOptions options;
};

// Featurizes every registry entry. Output does not depend on `workers`.
FeatureStore featurize_corpus(const core::Corpus& corpus, const FeaturizeRun& run);

}  // namespace scope::featurize
