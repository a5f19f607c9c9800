// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/interpret/interpret.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "scope/util/error.hpp"
#include "scope/util/parallel.hpp"
#include "scope/util/text.hpp"

namespace scope::interpret {

std::string_view embedding_name(EmbeddingKind k) {
  switch (k) {
    case EmbeddingKind::kResidueProfile: return "residue";
    case EmbeddingKind::kJoint: return "joint";
    case EmbeddingKind::kPooled: return "pooled";
  }
  return "residue";
}

EmbeddingKind parse_embedding(std::string_view name) {
  for (auto k : {EmbeddingKind::kResidueProfile, EmbeddingKind::kJoint, EmbeddingKind::kPooled}) {
    if (embedding_name(k) == name) return k;
  }
  throw InvalidArgument(fmt::format("unknown embedding kind '{}' (residue, joint, pooled)", name));
}

std::vector<AttentionVector> extract_attention(const model::DtiModel& model, const train::PairSet& pairs,
                                               EmbeddingKind kind, unsigned workers) {
  if (!model.has_attention()) throw InvalidArgument("attention export needs the BAN backbone");
  const model::BanWeights w = model.ban_weights();
  const int pool = model.config().head.pool;
  const std::vector<double> p = model.predict(pairs.inputs, 64, workers);
  std::vector<AttentionVector> out(pairs.size());
  parallel_for(pairs.size(), workers, [&](std::size_t i) {
    const auto rows = model.encode_pair(pairs.inputs[i]);
    const auto maps = model::attention_map(rows.drug, rows.protein, w);
    RowVector v;
    if (kind == EmbeddingKind::kResidueProfile) {
      v = RowVector::Zero(rows.protein.rows());
      for (const auto& m : maps) v += m.colwise().mean();
      v /= static_cast<double>(maps.size());
    } else {
      v = model::bilinear_pool(rows.drug, rows.protein, maps, w);
      if (kind == EmbeddingKind::kPooled) v = model::sum_pool(v, pool);
    }
    out[i] = {pairs.protein_ids[i], pairs.compound_ids[i], std::move(v), p[i], pairs.labels[i]};
  });
  return out;
}

ClusterAssignment cluster_protein(const std::vector<RowVector>& vectors, const UmapParams& umap,
                                  const OpticsParams& optics_params) {
  const auto n = static_cast<Eigen::Index>(vectors.size());
  ClusterAssignment r;
  r.cluster.assign(vectors.size(), -1);
  r.coords = Matrix::Zero(n, 2);
  if (n < optics_params.min_samples) {
    r.warning = fmt::format("{} vectors is fewer than min_samples={}; all marked noise", n, optics_params.min_samples);
    return r;
  }
  const Eigen::Index dim = vectors.front().size();
  Matrix x(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    const RowVector& v = vectors[static_cast<std::size_t>(i)];
    if (v.size() != dim) throw InvalidArgument("cluster_protein: vectors differ in length");
    const double l1 = v.cwiseAbs().sum();
    x.row(i) = l1 > 0.0 ? RowVector(v / l1) : v;
  }
  bool identical = true;
  for (Eigen::Index i = 1; i < n && identical; ++i) identical = (x.row(i) - x.row(0)).cwiseAbs().maxCoeff() <= 1e-12;
  if (identical) {
    // Nothing to separate: the reachability plot is flat and xi extraction
    // would report only noise.
    std::fill(r.cluster.begin(), r.cluster.end(), 0);
    r.n_clusters = 1;
    return r;
  }
  UmapParams up = umap;
  up.n_components = 2;
  r.coords = umap_embed(x, up);
  const OpticsResult o = optics(r.coords, optics_params);
  r.cluster = o.labels;
  std::set<int> distinct(r.cluster.begin(), r.cluster.end());
  distinct.erase(-1);
  r.n_clusters = static_cast<int>(distinct.size());
  return r;
}

double cluster_purity(const std::vector<int>& cluster, const std::vector<int>& reference) {
  if (cluster.size() != reference.size()) throw InvalidArgument("cluster_purity: size mismatch");
  std::map<int, std::map<int, int>> counts;
  int assigned = 0;
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    if (cluster[i] < 0) continue;
    ++counts[cluster[i]][reference[i]];
    ++assigned;
  }
  int agree = 0;
  for (const auto& [c, by_ref] : counts) {
    int best = 0;
    for (const auto& [ref, k] : by_ref) best = std::max(best, k);
    agree += best;
  }
  return assigned == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(assigned);
}

double noise_fraction(const std::vector<int>& cluster) {
  if (cluster.empty()) return 0.0;
  const auto noise = std::count(cluster.begin(), cluster.end(), -1);
  return static_cast<double>(noise) / static_cast<double>(cluster.size());
}

CountCurve accuracy_vs_count(const std::vector<std::string>& protein_ids, const std::vector<double>& scores,
                             const std::vector<int>& labels, const std::map<std::string, int>& n_known,
                             double threshold, const std::vector<double>& bin_edges) {
  if (protein_ids.size() != scores.size() || scores.size() != labels.size()) {
    throw InvalidArgument("accuracy_vs_count: input sizes differ");
  }
  if (!std::is_sorted(bin_edges.begin(), bin_edges.end())) {
    throw InvalidArgument("accuracy_vs_count: bin edges must be ascending");
  }
  std::map<std::string, std::pair<int, int>> tally;  // correct, total
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int pred = scores[i] > threshold ? 1 : 0;
    auto& t = tally[protein_ids[i]];
    t.first += pred == labels[i] ? 1 : 0;
    ++t.second;
  }
  CountCurve curve;
  for (const auto& [id, t] : tally) {
    const auto it = n_known.find(id);
    curve.points.push_back({id, it == n_known.end() ? 0 : it->second, t.second,
                            static_cast<double>(t.first) / static_cast<double>(t.second)});
  }
  std::stable_sort(curve.points.begin(), curve.points.end(),
                   [](const CountPoint& a, const CountPoint& b) { return a.n_known < b.n_known; });
  for (std::size_t b = 0; b < bin_edges.size(); ++b) {
    CountBin bin;
    bin.lo = bin_edges[b];
    bin.hi = b + 1 < bin_edges.size() ? bin_edges[b + 1] : std::numeric_limits<double>::infinity();
    std::vector<double> acc;
    for (const auto& p : curve.points) {
      if (p.n_known >= bin.lo && p.n_known < bin.hi) acc.push_back(p.accuracy);
    }
    bin.n = static_cast<int>(acc.size());
    if (!acc.empty()) {
      bin.mean = std::accumulate(acc.begin(), acc.end(), 0.0) / static_cast<double>(acc.size());
      bin.min = *std::min_element(acc.begin(), acc.end());
      bin.max = *std::max_element(acc.begin(), acc.end());
      if (acc.size() > 1) {
        double ss = 0.0;
        for (double a : acc) ss += (a - bin.mean) * (a - bin.mean);
        bin.std = std::sqrt(ss / static_cast<double>(acc.size() - 1));
      }
    }
    curve.bins.push_back(bin);
  }
  return curve;
}

void write_cluster_tsv(const std::filesystem::path& path, const std::vector<AttentionVector>& vectors,
                       const ClusterAssignment& assignment) {
  if (vectors.size() != assignment.cluster.size()) throw InvalidArgument("write_cluster_tsv: size mismatch");
  TsvTable t;
  t.header = {"compound_id", "cluster", "x", "y", "predicted_p", "label"};
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    t.rows.push_back({vectors[i].compound_id, std::to_string(assignment.cluster[i]),
                      format_double(assignment.coords(r, 0)), format_double(assignment.coords(r, 1)),
                      format_double(vectors[i].predicted_p), std::to_string(vectors[i].label)});
  }
  write_file(path, format_tsv(t));
}

void write_curve_tsv(const std::filesystem::path& path, const CountCurve& curve) {
  TsvTable t;
  t.header = {"protein_id", "n_known", "accuracy"};
  for (const auto& p : curve.points) {
    t.rows.push_back({p.protein_id, std::to_string(p.n_known), format_double(p.accuracy)});
  }
  write_file(path, format_tsv(t));
}

namespace {

constexpr double kWidth = 480.0;
constexpr double kHeight = 360.0;
constexpr double kMargin = 48.0;

const char* palette(int cluster) {
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return cluster < 0 ? "#c8c8c8" : colors[cluster % 10];
}

struct Frame {
  double x0, x1, y0, y1;
  double sx(double x) const { return kMargin + (x - x0) / std::max(x1 - x0, 1e-12) * (kWidth - 2 * kMargin); }
  double sy(double y) const {
    return kHeight - kMargin - (y - y0) / std::max(y1 - y0, 1e-12) * (kHeight - 2 * kMargin);
  }
};

std::string svg_open(const std::string& title, const std::string& xlabel, const std::string& ylabel) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{3}</text>\n"
      "<text x=\"{2}\" y=\"{4}\" text-anchor=\"middle\">{5}</text>\n"
      "<text x=\"14\" y=\"{6}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {6})\">{7}</text>\n"
      "<rect x=\"{8}\" y=\"{8}\" width=\"{9}\" height=\"{10}\" fill=\"none\" stroke=\"black\"/>\n",
      kWidth, kHeight, kWidth / 2, title, kHeight - 10, xlabel, kHeight / 2, ylabel, kMargin, kWidth - 2 * kMargin,
      kHeight - 2 * kMargin);
}

}  // namespace

void write_cluster_svg(const std::filesystem::path& path, const std::string& title,
                       const ClusterAssignment& assignment) {
  const Matrix& c = assignment.coords;
  Frame f{0, 1, 0, 1};
  if (c.rows() > 0) {
    f = {c.col(0).minCoeff(), c.col(0).maxCoeff(), c.col(1).minCoeff(), c.col(1).maxCoeff()};
  }
  std::string svg = svg_open(title, "UMAP 1", "UMAP 2");
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", f.sx(c(i, 0)), f.sy(c(i, 1)),
                       palette(assignment.cluster[static_cast<std::size_t>(i)]));
  }
  svg += "</svg>\n";
  write_file(path, svg);
}

void write_curve_svg(const std::filesystem::path& path, const CountCurve& curve) {
  Frame f{0, 1, 0, 1};
  for (const auto& p : curve.points) f.x1 = std::max(f.x1, static_cast<double>(p.n_known));
  std::string svg = svg_open("Accuracy vs known interactions", "known interactions", "accuracy");
  for (const auto& p : curve.points) {
    svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"#1f77b4\" fill-opacity=\"0.6\"/>\n",
                       f.sx(p.n_known), f.sy(p.accuracy));
  }
  std::string line;
  for (const auto& b : curve.bins) {
    if (b.n == 0) continue;
    const double hi = std::isinf(b.hi) ? f.x1 : std::min(b.hi, f.x1);
    const double mid = (b.lo + hi) / 2;
    line += fmt::format("{:.2f},{:.2f} ", f.sx(mid), f.sy(b.mean));
    svg += fmt::format("<line x1=\"{0:.2f}\" x2=\"{0:.2f}\" y1=\"{1:.2f}\" y2=\"{2:.2f}\" stroke=\"#d62728\"/>\n",
                       f.sx(mid), f.sy(std::max(0.0, b.mean - b.std)), f.sy(std::min(1.0, b.mean + b.std)));
  }
  if (!line.empty()) svg += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"#d62728\"/>\n", line);
  svg += "</svg>\n";
  write_file(path, svg);
}

}  // namespace scope::interpret
