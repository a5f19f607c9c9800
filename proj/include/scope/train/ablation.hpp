// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "scope/train/trainer.hpp"

namespace scope::train {

struct AblationVariant {
  model::ProteinVariant protein;
  model::CompoundVariant compound;
  model::Backbone backbone;

  std::string protein_label() const;   // e.g. "3D Graph HGNN"
  std::string compound_label() const;  // e.g. "3D Graph GVP no Pooling"
  std::string backbone_label() const;  // "BAN+MLP" or "MLP"
  std::string header() const;          // "protein / compound / backbone"
};

// The seven configurations of the ablation table, full model last.
std::vector<AblationVariant> ablation_variants();

struct AblationRow {
  AblationVariant variant;
  RepeatResult result;
};

// Runs every variant with n_runs seeds each on the same split.
std::vector<AblationRow> ablation_grid(const PairSet& train_set, const PairSet& val_set, const PairSet& test_set,
                                       const TrainConfig& base, int n_runs,
                                       const std::function<void(const AblationRow&)>& on_row = {});

// TSV with columns protein, compound, backbone, auroc, auprc, f1 ("m±s").
std::string ablation_tsv(const std::vector<AblationRow>& rows);
// Aligned plain-text table for terminals.
std::string ablation_table(const std::vector<AblationRow>& rows);

}  // namespace scope::train
