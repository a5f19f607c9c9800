// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "scope/core/types.hpp"
#include "scope/featurize/featurizer.hpp"
#include "scope/model/model.hpp"
#include "scope/train/metrics.hpp"
#include "scope/util/error.hpp"

namespace scope::train {

// Labelled pairs with their features resolved.
struct PairSet {
  std::vector<std::string> protein_ids;
  std::vector<std::string> compound_ids;
  std::vector<model::PairInput> inputs;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  void add(const std::string& protein_id, const std::string& compound_id, model::PairInput input, int label);
};

// Throws InvalidArgument when a record's protein or compound has no features.
PairSet make_pairs(const std::vector<core::InteractionRecord>& records, const featurize::FeatureStore& features);

struct TrainConfig {
  std::size_t batch_size = 64;
  double learning_rate = 5e-5;
  int max_epochs = 100;
  std::uint64_t seed = 0;
  unsigned workers = 1;  // evaluation threads
  model::ModelConfig model;

  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);  // missing keys keep defaults
  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;       // objective per training pair
  double val_auroc = 0.0;  // NaN when the validation split has one class
  nlohmann::json to_json() const;
};

struct TrainResult {
  std::unique_ptr<model::DtiModel> model;  // parameters of the selected epoch
  int best_epoch = 0;
  std::vector<EpochRecord> history;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

struct TrainHooks {
  // Compounds that must never appear in a training batch (the test split).
  std::set<std::string> forbidden_compounds;
  std::function<void(const EpochRecord&)> on_epoch;
};

// Minibatch Adam on the cross-entropy + L2 objective. After every epoch the
// validation AUROC is computed; the epoch with the highest value (earliest on
// ties; last epoch if AUROC is never defined) is returned.
TrainResult train(const PairSet& train_set, const PairSet& val_set, const TrainConfig& config,
                  const TrainHooks& hooks = {});

EvalReport evaluate(const model::DtiModel& model, const PairSet& pairs, std::uint64_t seed = 0, unsigned workers = 1);

struct RepeatResult {
  std::vector<EvalReport> runs;
  std::vector<std::uint64_t> seeds;
  Summary auroc, auprc, f1, accuracy, sensitivity, specificity;
  nlohmann::json to_json() const;
};

// Trains n_runs models with seeds base.seed, base.seed + 1, ... on the same
// split and summarises their test metrics. Needs n_runs >= 2.
RepeatResult run_repeats(const PairSet& train_set, const PairSet& val_set, const PairSet& test_set,
                         const TrainConfig& base, int n_runs);
RepeatResult summarize_runs(std::vector<EvalReport> runs, std::vector<std::uint64_t> seeds);

}  // namespace scope::train
