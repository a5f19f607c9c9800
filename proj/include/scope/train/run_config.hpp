// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "scope/balance/split.hpp"
#include "scope/core/types.hpp"
#include "scope/featurize/featurizer.hpp"
#include "scope/train/trainer.hpp"

namespace scope::train {

// Experiment description shared by `scope train`, `eval`, `ablation` and
// `interpret`. JSON file:
//   {"corpus": dir, "split": manifest.tsv, "conformer": "coarse",
//    "feature_cache": dir?, "out": dir, "runs": 5, "train": {TrainConfig}}
// Relative paths resolve against the file's directory.
struct RunConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path split_manifest;
  std::string conformer = "coarse";
  std::optional<std::filesystem::path> feature_cache;
  std::filesystem::path out_dir = "run";
  int runs = 5;
  TrainConfig train;

  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
  static RunConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

struct PreparedData {
  core::Corpus corpus;
  balance::SplitManifest manifest;
  featurize::FeatureStore features;
  PairSet train;
  PairSet val;
  PairSet test;

  const PairSet& pairs(balance::Split split) const;
};

// Reads the corpus and manifest, featurizes every registry entry (through
// the cache when configured) and resolves the three pair sets.
PreparedData prepare_data(const RunConfig& config, unsigned workers = 1);

}  // namespace scope::train
