// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/interpret/optics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "scope/util/error.hpp"

namespace scope::interpret {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rounds to 15 significant decimals, as the reference implementation does,
// so near-ties order the same way.
double round15(double v) {
  if (!std::isfinite(v)) return v;
  return std::round(v * 1e15) / 1e15;
}

struct SteepDownArea {
  int start;
  int end;
  double mib;
};

int extend_region(const std::vector<bool>& steep, const std::vector<bool>& xward, int start, int min_samples) {
  const int n = static_cast<int>(steep.size());
  int non_xward = 0;
  int end = start;
  for (int index = start; index < n; ++index) {
    if (steep[static_cast<std::size_t>(index)]) {
      non_xward = 0;
      end = index;
    } else if (!xward[static_cast<std::size_t>(index)]) {
      // Not steep, but still heading the same way.
      if (++non_xward > min_samples) break;
    } else {
      return end;
    }
  }
  return end;
}

void update_filter_sdas(std::vector<SteepDownArea>& sdas, double mib, double xi_complement,
                        const std::vector<double>& plot) {
  if (std::isinf(mib)) {
    sdas.clear();
    return;
  }
  std::erase_if(sdas, [&](const SteepDownArea& d) { return mib > plot[static_cast<std::size_t>(d.start)] * xi_complement; });
  for (auto& d : sdas) d.mib = std::max(d.mib, mib);
}

std::optional<std::pair<int, int>> correct_predecessor(const std::vector<double>& plot, const std::vector<int>& pred_plot,
                                                       const std::vector<int>& ordering, int s, int e) {
  while (s < e) {
    if (plot[static_cast<std::size_t>(s)] > plot[static_cast<std::size_t>(e)]) return std::pair{s, e};
    const int p_e = pred_plot[static_cast<std::size_t>(e)];
    for (int i = s; i < e; ++i) {
      if (p_e == ordering[static_cast<std::size_t>(i)]) return std::pair{s, e};
    }
    --e;
  }
  return std::nullopt;
}

std::vector<std::pair<int, int>> xi_clusters(std::vector<double> plot, const std::vector<int>& pred_plot,
                                             const std::vector<int>& ordering, double xi, int min_samples,
                                             int min_cluster_size, bool correction) {
  // A trailing infinity lets a cluster close at the end of the plot.
  plot.push_back(kInf);
  const std::size_t n = plot.size() - 1;
  const double xi_complement = 1.0 - xi;
  std::vector<bool> steep_up(n), steep_down(n), up(n), down(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ratio = plot[i] / plot[i + 1];  // NaN for inf/inf and 0/0
    steep_up[i] = ratio <= xi_complement;
    steep_down[i] = ratio >= 1.0 / xi_complement;
    down[i] = ratio > 1.0;
    up[i] = ratio < 1.0;
  }
  std::vector<SteepDownArea> sdas;
  std::vector<std::pair<int, int>> clusters;
  int index = 0;
  double mib = 0.0;
  for (int steep_index = 0; steep_index < static_cast<int>(n); ++steep_index) {
    const auto si = static_cast<std::size_t>(steep_index);
    if (!(steep_up[si] || steep_down[si])) continue;
    if (steep_index < index) continue;
    for (int i = index; i <= steep_index; ++i) mib = std::max(mib, plot[static_cast<std::size_t>(i)]);
    if (steep_down[si]) {
      update_filter_sdas(sdas, mib, xi_complement, plot);
      const int d_end = extend_region(steep_down, up, steep_index, min_samples);
      sdas.push_back({steep_index, d_end, 0.0});
      index = d_end + 1;
      mib = plot[static_cast<std::size_t>(index)];
      continue;
    }
    update_filter_sdas(sdas, mib, xi_complement, plot);
    const int u_start = steep_index;
    const int u_end = extend_region(steep_up, down, u_start, min_samples);
    index = u_end + 1;
    mib = plot[static_cast<std::size_t>(index)];
    std::vector<std::pair<int, int>> found;
    for (const auto& d : sdas) {
      int c_start = d.start;
      int c_end = u_end;
      const double after = plot[static_cast<std::size_t>(c_end + 1)];
      if (after * xi_complement < d.mib) continue;
      const double d_max = plot[static_cast<std::size_t>(d.start)];
      if (d_max * xi_complement >= after) {
        while (plot[static_cast<std::size_t>(c_start + 1)] > after && c_start < d.end) ++c_start;
      } else if (after * xi_complement >= d_max) {
        while (plot[static_cast<std::size_t>(c_end - 1)] > d_max && c_end > u_start) --c_end;
      }
      if (correction) {
        auto corrected = correct_predecessor(plot, pred_plot, ordering, c_start, c_end);
        if (!corrected) continue;
        std::tie(c_start, c_end) = *corrected;
      }
      if (c_end - c_start + 1 < min_cluster_size) continue;
      if (c_start > d.end) continue;
      if (c_end < u_start) continue;
      found.emplace_back(c_start, c_end);
    }
    // Smaller (later-opened) clusters first.
    clusters.insert(clusters.end(), found.rbegin(), found.rend());
  }
  return clusters;
}

}  // namespace

OpticsResult optics(const Matrix& x, const OpticsParams& params) {
  const auto n = static_cast<int>(x.rows());
  if (params.min_samples < 2) throw InvalidArgument("optics: min_samples must be at least 2");
  if (!(params.xi > 0.0 && params.xi < 1.0)) throw InvalidArgument("optics: xi must lie in (0, 1)");
  OpticsResult r;
  r.labels.assign(static_cast<std::size_t>(n), -1);
  if (n < params.min_samples) return r;

  Matrix dist(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) dist(i, j) = (x.row(i) - x.row(j)).norm();
  }
  r.core_distances.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(dist.row(i).data(), dist.row(i).data() + n);
    std::nth_element(row.begin(), row.begin() + (params.min_samples - 1), row.end());
    const double core = row[static_cast<std::size_t>(params.min_samples - 1)];  // self counts
    r.core_distances[static_cast<std::size_t>(i)] = core > params.max_eps ? kInf : round15(core);
  }
  r.reachability.assign(static_cast<std::size_t>(n), kInf);
  r.predecessor.assign(static_cast<std::size_t>(n), -1);
  std::vector<bool> processed(static_cast<std::size_t>(n), false);
  for (int step = 0; step < n; ++step) {
    int point = -1;
    for (int i = 0; i < n; ++i) {
      if (processed[static_cast<std::size_t>(i)]) continue;
      if (point < 0 || r.reachability[static_cast<std::size_t>(i)] < r.reachability[static_cast<std::size_t>(point)]) {
        point = i;
      }
    }
    processed[static_cast<std::size_t>(point)] = true;
    r.ordering.push_back(point);
    const double core = r.core_distances[static_cast<std::size_t>(point)];
    if (std::isinf(core)) continue;
    for (int o = 0; o < n; ++o) {
      if (processed[static_cast<std::size_t>(o)] || dist(point, o) > params.max_eps) continue;
      const double reach = round15(std::max(dist(point, o), core));
      if (reach < r.reachability[static_cast<std::size_t>(o)]) {
        r.reachability[static_cast<std::size_t>(o)] = reach;
        r.predecessor[static_cast<std::size_t>(o)] = point;
      }
    }
  }
  std::vector<double> plot;
  std::vector<int> pred_plot;
  for (int p : r.ordering) {
    plot.push_back(r.reachability[static_cast<std::size_t>(p)]);
    pred_plot.push_back(r.predecessor[static_cast<std::size_t>(p)]);
  }
  int min_cluster = params.min_samples;
  if (params.min_cluster_size > 0.0 && params.min_cluster_size < 1.0) {
    min_cluster = std::max(2, static_cast<int>(params.min_cluster_size * n));
  } else if (params.min_cluster_size >= 1.0) {
    min_cluster = std::max(2, static_cast<int>(params.min_cluster_size));
  }
  r.clusters = xi_clusters(plot, pred_plot, r.ordering, params.xi, params.min_samples, min_cluster,
                           params.predecessor_correction);
  std::vector<int> by_position(static_cast<std::size_t>(n), -1);
  int label = 0;
  for (const auto& [s, e] : r.clusters) {
    const bool free = std::all_of(by_position.begin() + s, by_position.begin() + e + 1, [](int l) { return l == -1; });
    if (!free) continue;
    std::fill(by_position.begin() + s, by_position.begin() + e + 1, label++);
  }
  for (int pos = 0; pos < n; ++pos) {
    r.labels[static_cast<std::size_t>(r.ordering[static_cast<std::size_t>(pos)])] = by_position[static_cast<std::size_t>(pos)];
  }
  return r;
}

}  // namespace scope::interpret
