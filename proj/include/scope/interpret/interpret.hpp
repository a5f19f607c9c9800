// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "scope/interpret/optics.hpp"
#include "scope/interpret/umap.hpp"
#include "scope/train/trainer.hpp"

namespace scope::interpret {

// kResidueProfile: attention averaged over heads and drug rows (one value per
// residue). kJoint: the head-averaged bilinear representation before sum
// pooling. kPooled: the same after sum pooling.
enum class EmbeddingKind { kResidueProfile, kJoint, kPooled };

std::string_view embedding_name(EmbeddingKind k);
EmbeddingKind parse_embedding(std::string_view name);

struct AttentionVector {
  std::string protein_id;
  std::string compound_id;
  RowVector vector;
  double predicted_p = 0.0;
  int label = 0;
};

// Requires a BAN-backbone model.
std::vector<AttentionVector> extract_attention(const model::DtiModel& model, const train::PairSet& pairs,
                                               EmbeddingKind kind = EmbeddingKind::kResidueProfile,
                                               unsigned workers = 1);

struct ClusterAssignment {
  std::vector<int> cluster;  // -1 = noise
  Matrix coords;             // n x 2 projection
  int n_clusters = 0;
  std::string warning;       // set when the input was too small to cluster
};

// L1-normalises each vector, projects with UMAP and clusters the projection
// with OPTICS. Identical inputs form a single cluster; fewer vectors than
// min_samples are all noise.
ClusterAssignment cluster_protein(const std::vector<RowVector>& vectors, const UmapParams& umap = {},
                                  const OpticsParams& optics_params = {});

// Noise-adjusted purity: among points assigned to a cluster, the fraction
// whose reference label is their cluster's majority label.
double cluster_purity(const std::vector<int>& cluster, const std::vector<int>& reference);
double noise_fraction(const std::vector<int>& cluster);

struct CountPoint {
  std::string protein_id;
  int n_known = 0;   // training interactions
  int n_test = 0;
  double accuracy = 0.0;
};

struct CountBin {
  double lo = 0.0;
  double hi = 0.0;  // exclusive; infinite for the last bin
  int n = 0;
  double mean = 0.0;
  double std = 0.0;  // sample deviation, 0 for fewer than 2 proteins
  double min = 0.0;
  double max = 0.0;
};

struct CountCurve {
  std::vector<CountPoint> points;  // sorted by n_known, then protein_id
  std::vector<CountBin> bins;
};

// Per-protein accuracy at `threshold` (positive when score > threshold)
// against the number of known training interactions. Bins are
// [edges[i], edges[i+1]) plus an open last bin; empty bins are kept with n = 0.
CountCurve accuracy_vs_count(const std::vector<std::string>& protein_ids, const std::vector<double>& scores,
                             const std::vector<int>& labels, const std::map<std::string, int>& n_known,
                             double threshold, const std::vector<double>& bin_edges);

void write_cluster_tsv(const std::filesystem::path& path, const std::vector<AttentionVector>& vectors,
                       const ClusterAssignment& assignment);
void write_curve_tsv(const std::filesystem::path& path, const CountCurve& curve);
void write_cluster_svg(const std::filesystem::path& path, const std::string& title,
                       const ClusterAssignment& assignment);
void write_curve_svg(const std::filesystem::path& path, const CountCurve& curve);

}  // namespace scope::interpret
