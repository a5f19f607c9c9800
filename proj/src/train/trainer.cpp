// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/train/trainer.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <cmath>
#include <limits>
#include <numeric>

namespace scope::train {

using nlohmann::json;

void PairSet::add(const std::string& protein_id, const std::string& compound_id, model::PairInput input, int label) {
  protein_ids.push_back(protein_id);
  compound_ids.push_back(compound_id);
  inputs.push_back(input);
  labels.push_back(label);
}

PairSet make_pairs(const std::vector<core::InteractionRecord>& records, const featurize::FeatureStore& features) {
  PairSet out;
  for (const auto& r : records) {
    auto p = features.proteins.find(r.protein_id);
    auto c = features.compounds.find(r.compound_id);
    if (p == features.proteins.end()) throw InvalidArgument(fmt::format("no features for protein '{}'", r.protein_id));
    if (c == features.compounds.end()) {
      throw InvalidArgument(fmt::format("no features for compound '{}'", r.compound_id));
    }
    out.add(r.protein_id, r.compound_id, {p->second.get(), c->second.get()}, r.label);
  }
  return out;
}

json TrainConfig::to_json() const {
  return {{"batch_size", batch_size}, {"learning_rate", learning_rate}, {"max_epochs", max_epochs},
          {"seed", seed},             {"workers", workers},             {"model", model.to_json()}};
}

TrainConfig TrainConfig::from_json(const json& j) {
  TrainConfig c;
  c.batch_size = j.value("batch_size", c.batch_size);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.max_epochs = j.value("max_epochs", c.max_epochs);
  c.seed = j.value("seed", c.seed);
  c.workers = j.value("workers", c.workers);
  if (j.contains("model")) c.model = model::ModelConfig::from_json(j.at("model"));
  c.validate();
  return c;
}

void TrainConfig::validate() const {
  if (batch_size == 0 || !(learning_rate > 0.0) || max_epochs <= 0 || workers == 0 || model.head.lambda < 0.0) {
    throw InvalidArgument("train config: batch size, learning rate, epochs and workers must be positive");
  }
}

json EpochRecord::to_json() const {
  json j = {{"epoch", epoch}, {"loss", loss}, {"val_auroc", nullptr}};
  if (std::isfinite(val_auroc)) j["val_auroc"] = val_auroc;
  return j;
}

namespace {

double safe_auroc(const std::vector<double>& scores, const std::vector<int>& labels) {
  const auto pos = std::count(labels.begin(), labels.end(), 1);
  if (pos == 0 || pos == static_cast<long>(labels.size())) return std::numeric_limits<double>::quiet_NaN();
  return auroc(scores, labels);
}

}  // namespace

TrainResult train(const PairSet& train_set, const PairSet& val_set, const TrainConfig& config,
                  const TrainHooks& hooks) {
  config.validate();
  if (train_set.size() == 0) throw InvalidArgument("train: empty training split");
  for (const auto& id : train_set.compound_ids) {
    if (hooks.forbidden_compounds.contains(id)) {
      throw TrainingError(fmt::format("train: test compound '{}' is in the training split", id));
    }
  }
  auto model = std::make_unique<model::DtiModel>(config.model, config.seed);
  TrainResult result;
  result.model = std::make_unique<model::DtiModel>(config.model, config.seed);
  nn::Adam adam(model->params(), {.lr = config.learning_rate});
  Rng shuffle_rng = Rng::derive(config.seed, "train-shuffle");
  Rng dropout_rng = Rng::derive(config.seed, "train-dropout");
  const double lambda = config.model.head.lambda;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  double best_auroc = -1.0;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t lo = 0; lo < order.size(); lo += config.batch_size) {
      const std::size_t hi = std::min(order.size(), lo + config.batch_size);
      std::vector<model::PairInput> inputs;
      std::vector<double> labels;
      for (std::size_t k = lo; k < hi; ++k) {
        const std::size_t i = order[k];
        if (hooks.forbidden_compounds.contains(train_set.compound_ids[i])) {
          throw TrainingError(fmt::format("train: test compound '{}' reached a training batch", train_set.compound_ids[i]));
        }
        inputs.push_back(train_set.inputs[i]);
        labels.push_back(static_cast<double>(train_set.labels[i]));
      }
      model->params().zero_grad();
      const nn::Context ctx{true, &dropout_rng};
      const nn::Tensor loss =
          nn::add(nn::bce_with_logits(model->logits(inputs, ctx), labels), model::l2_penalty(model->params(), lambda));
      if (!std::isfinite(loss.item())) {
        std::vector<std::string> ids;
        for (std::size_t k = lo; k < hi; ++k) {
          ids.push_back(train_set.protein_ids[order[k]] + "|" + train_set.compound_ids[order[k]]);
        }
        throw TrainingError(fmt::format("non-finite loss at epoch {}; batch pairs: {}", epoch, fmt::join(ids, ", ")));
      }
      loss.backward();
      adam.step();
      epoch_loss += loss.item();
    }
    EpochRecord record{epoch, epoch_loss / static_cast<double>(train_set.size()),
                       std::numeric_limits<double>::quiet_NaN()};
    if (val_set.size() > 0) {
      record.val_auroc = safe_auroc(model->predict(val_set.inputs, config.batch_size, config.workers), val_set.labels);
    }
    result.history.push_back(record);
    if (hooks.on_epoch) hooks.on_epoch(record);
    const bool better = std::isfinite(record.val_auroc) && record.val_auroc > best_auroc;
    const bool fallback = best_auroc < 0.0 && epoch == config.max_epochs;
    if (better || fallback) {
      if (better) best_auroc = record.val_auroc;
      result.best_epoch = epoch;
      result.model->params().copy_values_from(model->params());
    }
  }
  return result;
}

EvalReport evaluate(const model::DtiModel& model, const PairSet& pairs, std::uint64_t seed, unsigned workers) {
  const auto scores = model.predict(pairs.inputs, 64, workers);
  return compute_metrics(scores, pairs.labels, seed);
}

RepeatResult summarize_runs(std::vector<EvalReport> runs, std::vector<std::uint64_t> seeds) {
  RepeatResult r;
  const auto pick = [&](double EvalReport::*field) {
    std::vector<double> v;
    for (const auto& run : runs) v.push_back(run.*field);
    return summarize(v);
  };
  r.auroc = pick(&EvalReport::auroc);
  r.auprc = pick(&EvalReport::auprc);
  r.f1 = pick(&EvalReport::f1);
  r.accuracy = pick(&EvalReport::accuracy);
  r.sensitivity = pick(&EvalReport::sensitivity);
  r.specificity = pick(&EvalReport::specificity);
  r.runs = std::move(runs);
  r.seeds = std::move(seeds);
  return r;
}

RepeatResult run_repeats(const PairSet& train_set, const PairSet& val_set, const PairSet& test_set,
                         const TrainConfig& base, int n_runs) {
  if (n_runs < 2) throw InvalidArgument("run_repeats: need at least two runs");
  std::set<std::string> test_compounds(test_set.compound_ids.begin(), test_set.compound_ids.end());
  std::vector<EvalReport> runs;
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < n_runs; ++i) {
    TrainConfig cfg = base;
    cfg.seed = base.seed + static_cast<std::uint64_t>(i);
    TrainResult trained = train(train_set, val_set, cfg, {test_compounds, {}});
    runs.push_back(evaluate(*trained.model, test_set, cfg.seed, cfg.workers));
    seeds.push_back(cfg.seed);
  }
  return summarize_runs(std::move(runs), std::move(seeds));
}

json RepeatResult::to_json() const {
  json j = {{"seeds", seeds}, {"runs", json::array()}};
  for (const auto& r : runs) j["runs"].push_back(r.to_json());
  const std::pair<const char*, const Summary*> fields[] = {{"auroc", &auroc}, {"auprc", &auprc},
                                                           {"f1", &f1},       {"accuracy", &accuracy},
                                                           {"sensitivity", &sensitivity},
                                                           {"specificity", &specificity}};
  for (const auto& [name, s] : fields) j["summary"][name] = {{"mean", s->mean}, {"std", s->std}, {"text", s->str()}};
  return j;
}

}  // namespace scope::train
