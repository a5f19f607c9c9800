// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/train/ablation.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace scope::train {

using model::Backbone;
using model::CompoundVariant;
using model::ProteinVariant;

std::string AblationVariant::protein_label() const {
  switch (protein) {
    case ProteinVariant::kHgnn3d:
      return "3D Graph HGNN";
    case ProteinVariant::kOnehot1d:
      return "1D Onehot";
    case ProteinVariant::kCnn1d:
      return "1D CNN";
  }
  return "?";
}

std::string AblationVariant::compound_label() const {
  switch (compound) {
    case CompoundVariant::kGvp3dPooled:
      return "3D Graph GVP";
    case CompoundVariant::kGvp3dUnpooled:
      return "3D Graph GVP no Pooling";
    case CompoundVariant::kGraph2d:
      return "2D Graph";
    case CompoundVariant::kFingerprint1d:
      return "1D Fingerprint";
  }
  return "?";
}

std::string AblationVariant::backbone_label() const { return backbone == Backbone::kBan ? "BAN+MLP" : "MLP"; }

std::string AblationVariant::header() const {
  return fmt::format("{} / {} / {}", protein_label(), compound_label(), backbone_label());
}

std::vector<AblationVariant> ablation_variants() {
  return {
      {ProteinVariant::kHgnn3d, CompoundVariant::kFingerprint1d, Backbone::kBan},
      {ProteinVariant::kHgnn3d, CompoundVariant::kGraph2d, Backbone::kBan},
      {ProteinVariant::kHgnn3d, CompoundVariant::kGvp3dUnpooled, Backbone::kBan},
      {ProteinVariant::kOnehot1d, CompoundVariant::kGvp3dPooled, Backbone::kBan},
      {ProteinVariant::kCnn1d, CompoundVariant::kGvp3dPooled, Backbone::kBan},
      {ProteinVariant::kHgnn3d, CompoundVariant::kGvp3dPooled, Backbone::kMlp},
      {ProteinVariant::kHgnn3d, CompoundVariant::kGvp3dPooled, Backbone::kBan},
  };
}

std::vector<AblationRow> ablation_grid(const PairSet& train_set, const PairSet& val_set, const PairSet& test_set,
                                       const TrainConfig& base, int n_runs,
                                       const std::function<void(const AblationRow&)>& on_row) {
  std::vector<AblationRow> rows;
  for (const auto& v : ablation_variants()) {
    TrainConfig cfg = base;
    cfg.model.protein = v.protein;
    cfg.model.compound = v.compound;
    cfg.model.backbone = v.backbone;
    rows.push_back({v, run_repeats(train_set, val_set, test_set, cfg, n_runs)});
    if (on_row) on_row(rows.back());
  }
  return rows;
}

std::string ablation_tsv(const std::vector<AblationRow>& rows) {
  std::string out = "protein\tcompound\tbackbone\tauroc\tauprc\tf1\n";
  for (const auto& r : rows) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", r.variant.protein_label(), r.variant.compound_label(),
                       r.variant.backbone_label(), r.result.auroc.str(), r.result.auprc.str(), r.result.f1.str());
  }
  return out;
}

std::string ablation_table(const std::vector<AblationRow>& rows) {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.variant.header().size());
  std::string out = fmt::format("{:<{}}  {:<11}  {:<11}  {:<11}\n", "Config", width, "AUROC", "AUPRC", "F1");
  for (const auto& r : rows) {
    // fmt pads by display width, so the two-byte "±" needs no correction.
    out += fmt::format("{:<{}}  {:<11}  {:<11}  {:<11}\n", r.variant.header(), width, r.result.auroc.str(),
                       r.result.auprc.str(), r.result.f1.str());
  }
  return out;
}

}  // namespace scope::train
