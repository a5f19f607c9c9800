// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/train/run_config.hpp"

#include <fmt/format.h>

#include <memory>

#include "scope/chem/conformer.hpp"
#include "scope/core/corpus_io.hpp"
#include "scope/util/text.hpp"

namespace scope::train {

using nlohmann::json;

RunConfig RunConfig::from_json(const json& j, const std::filesystem::path& base) {
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() || base.empty() ? fp : base / fp;
  };
  RunConfig c;
  if (!j.contains("corpus") || !j.contains("split")) throw InvalidArgument("run config needs 'corpus' and 'split'");
  c.corpus_dir = resolve(j.at("corpus").get<std::string>());
  c.split_manifest = resolve(j.at("split").get<std::string>());
  c.conformer = j.value("conformer", c.conformer);
  if (j.contains("feature_cache") && !j.at("feature_cache").is_null()) {
    c.feature_cache = resolve(j.at("feature_cache").get<std::string>());
  }
  c.out_dir = resolve(j.value("out", c.out_dir.string()));
  c.runs = j.value("runs", c.runs);
  if (j.contains("train")) c.train = TrainConfig::from_json(j.at("train"));
  if (c.runs < 1) throw InvalidArgument("run config: runs must be positive");
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  const json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError(fmt::format("{}: not a JSON object", path.string()));
  return from_json(j, path.parent_path());
}

json RunConfig::to_json() const {
  return {{"corpus", corpus_dir.string()},
          {"split", split_manifest.string()},
          {"conformer", conformer},
          {"feature_cache", feature_cache ? json(feature_cache->string()) : json()},
          {"out", out_dir.string()},
          {"runs", runs},
          {"train", train.to_json()}};
}

const PairSet& PreparedData::pairs(balance::Split split) const {
  switch (split) {
    case balance::Split::kTrain: return train;
    case balance::Split::kVal: return val;
    case balance::Split::kTest: return test;
  }
  return test;
}

PreparedData prepare_data(const RunConfig& config, unsigned workers) {
  PreparedData d;
  d.corpus = core::read_corpus(config.corpus_dir);
  d.manifest = balance::SplitManifest::read(config.split_manifest);
  const auto adapter = chem::make_conformer_adapter(config.conformer);
  std::unique_ptr<featurize::FeatureCache> cache;
  if (config.feature_cache) cache = std::make_unique<featurize::FeatureCache>(*config.feature_cache);
  featurize::FeaturizeRun run;
  run.adapter = adapter.get();
  run.cache = cache.get();
  run.workers = workers;
  d.features = featurize::featurize_corpus(d.corpus, run);
  d.train = make_pairs(balance::interactions_in(d.corpus, d.manifest, balance::Split::kTrain), d.features);
  d.val = make_pairs(balance::interactions_in(d.corpus, d.manifest, balance::Split::kVal), d.features);
  d.test = make_pairs(balance::interactions_in(d.corpus, d.manifest, balance::Split::kTest), d.features);
  return d;
}

}  // namespace scope::train
