// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/interpret/umap.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "scope/util/error.hpp"
#include "scope/util/rng.hpp"

namespace scope::interpret {
namespace {

double curve(double x, double a, double b) { return 1.0 / (1.0 + a * std::pow(x, 2.0 * b)); }

// Per-point memberships exp(-(d - rho) / sigma) over the k nearest
// neighbours, with sigma chosen so they sum to log2(k).
Matrix fuzzy_graph(const Matrix& x, int k) {
  const Eigen::Index n = x.rows();
  Matrix dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) dist(i, j) = (x.row(i) - x.row(j)).norm();
  }
  double mean_all = dist.sum() / static_cast<double>(n * n);
  Matrix w = Matrix::Zero(n, n);
  const double target = std::log2(static_cast<double>(k));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    // Self first, then by distance and index.
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
      if ((a == i) != (b == i)) return a == i;
      return dist(i, a) < dist(i, b);
    });
    idx.resize(static_cast<std::size_t>(k));
    double rho = 0.0;
    for (auto j : idx) {
      if (dist(i, j) > 0.0) {
        rho = dist(i, j);
        break;
      }
    }
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double sigma = 1.0;
    for (int iter = 0; iter < 64; ++iter) {
      double psum = 0.0;
      for (std::size_t t = 1; t < idx.size(); ++t) {
        const double d = dist(i, idx[t]) - rho;
        psum += d > 0.0 ? std::exp(-d / sigma) : 1.0;
      }
      if (std::abs(psum - target) < 1e-5) break;
      if (psum > target) {
        hi = sigma;
        sigma = 0.5 * (lo + hi);
      } else {
        lo = sigma;
        sigma = std::isinf(hi) ? sigma * 2.0 : 0.5 * (lo + hi);
      }
    }
    const double mean_i = [&] {
      double s = 0.0;
      for (auto j : idx) s += dist(i, j);
      return s / static_cast<double>(idx.size());
    }();
    const double floor = 1e-3 * (rho > 0.0 ? mean_i : mean_all);
    sigma = std::max(sigma, floor);
    for (std::size_t t = 1; t < idx.size(); ++t) {
      const double d = dist(i, idx[t]) - rho;
      w(i, idx[t]) = d > 0.0 ? std::exp(-d / sigma) : 1.0;
    }
  }
  // Fuzzy union: a + b - ab.
  Matrix sym = w + w.transpose() - w.cwiseProduct(w.transpose());
  return sym;
}

Matrix spectral_init(const Matrix& w, int dims, Rng& rng) {
  const Eigen::Index n = w.rows();
  Eigen::VectorXd deg = w.rowwise().sum();
  Eigen::VectorXd inv_sqrt = deg.unaryExpr([](double d) { return d > 0.0 ? 1.0 / std::sqrt(d) : 0.0; });
  Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(n, n) - inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  Matrix coords(n, dims);
  const Eigen::Index available = std::max<Eigen::Index>(0, std::min<Eigen::Index>(dims, n - 1));
  for (Eigen::Index c = 0; c < dims; ++c) {
    if (c < available) {
      coords.col(c) = solver.eigenvectors().col(c + 1);
    } else {
      for (Eigen::Index i = 0; i < n; ++i) coords(i, c) = rng.uniform(-1.0, 1.0);
    }
  }
  const double extent = coords.cwiseAbs().maxCoeff();
  if (extent > 0.0) coords *= 10.0 / extent;
  for (Eigen::Index i = 0; i < coords.size(); ++i) coords.data()[i] += 1e-4 * rng.normal();
  for (Eigen::Index c = 0; c < dims; ++c) {
    const double lo = coords.col(c).minCoeff();
    const double hi = coords.col(c).maxCoeff();
    if (hi > lo) coords.col(c) = 10.0 * (coords.col(c).array() - lo) / (hi - lo);
  }
  return coords;
}

double clip(double v) { return std::clamp(v, -4.0, 4.0); }

}  // namespace

std::pair<double, double> fit_ab(double spread, double min_dist) {
  constexpr int kPoints = 300;
  std::vector<double> xs(kPoints);
  std::vector<double> ys(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    xs[static_cast<std::size_t>(i)] = 3.0 * spread * i / (kPoints - 1);
    const double x = xs[static_cast<std::size_t>(i)];
    ys[static_cast<std::size_t>(i)] = x < min_dist ? 1.0 : std::exp(-(x - min_dist) / spread);
  }
  // Levenberg-Marquardt on (a, b) from (1, 1).
  Eigen::Vector2d p(1.0, 1.0);
  double lambda = 1e-3;
  const auto sse = [&](const Eigen::Vector2d& q) {
    double s = 0.0;
    for (int i = 0; i < kPoints; ++i) {
      const double r = curve(xs[static_cast<std::size_t>(i)], q(0), q(1)) - ys[static_cast<std::size_t>(i)];
      s += r * r;
    }
    return s;
  };
  double err = sse(p);
  for (int iter = 0; iter < 500; ++iter) {
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
    for (int i = 0; i < kPoints; ++i) {
      const double x = xs[static_cast<std::size_t>(i)];
      const double f = curve(x, p(0), p(1));
      Eigen::Vector2d g = Eigen::Vector2d::Zero();
      if (x > 0.0) {
        const double x2b = std::pow(x, 2.0 * p(1));
        g(0) = -f * f * x2b;
        g(1) = -f * f * p(0) * x2b * 2.0 * std::log(x);
      }
      jtj += g * g.transpose();
      jtr += g * (f - ys[static_cast<std::size_t>(i)]);
    }
    Eigen::Matrix2d damped = jtj;
    damped.diagonal() *= 1.0 + lambda;
    const Eigen::Vector2d step = damped.ldlt().solve(-jtr);
    const Eigen::Vector2d next = p + step;
    const double next_err = next(0) > 0.0 && next(1) > 0.0 ? sse(next) : std::numeric_limits<double>::infinity();
    if (next_err < err) {
      const bool converged = err - next_err < 1e-14 * std::max(1.0, err);
      p = next;
      err = next_err;
      lambda *= 0.3;
      if (converged) break;
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }
  return {p(0), p(1)};
}

Matrix umap_embed(const Matrix& x, const UmapParams& params) {
  const Eigen::Index n = x.rows();
  if (n == 0) throw InvalidArgument("umap: no samples");
  if (params.n_neighbors < 2 || params.n_components < 1 || params.n_epochs < 1) {
    throw InvalidArgument("umap: n_neighbors >= 2, n_components >= 1 and n_epochs >= 1 required");
  }
  Rng rng(params.seed);
  if (n == 1) return Matrix::Zero(1, params.n_components);
  const int k = static_cast<int>(std::min<Eigen::Index>(params.n_neighbors, n));
  const Matrix w = fuzzy_graph(x, k);
  Matrix emb = spectral_init(w, params.n_components, rng);
  const auto [a, b] = fit_ab(params.spread, params.min_dist);

  struct Edge {
    Eigen::Index head, tail;
    double epochs_per_sample;
  };
  std::vector<Edge> edges;
  const double max_w = w.maxCoeff();
  if (max_w <= 0.0) return emb;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j || w(i, j) < max_w / params.n_epochs) continue;
      edges.push_back({i, j, max_w / w(i, j)});
    }
  }
  std::vector<double> next_sample(edges.size());
  std::vector<double> next_negative(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    next_sample[e] = edges[e].epochs_per_sample;
    next_negative[e] = edges[e].epochs_per_sample / params.negative_sample_rate;
  }
  const int dims = params.n_components;
  double alpha = 1.0;
  for (int epoch = 0; epoch < params.n_epochs; ++epoch) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (next_sample[e] > epoch) continue;
      const auto j = edges[e].head;
      const auto t = edges[e].tail;
      const double d2 = (emb.row(j) - emb.row(t)).squaredNorm();
      double coeff = 0.0;
      if (d2 > 0.0) coeff = -2.0 * a * b * std::pow(d2, b - 1.0) / (a * std::pow(d2, b) + 1.0);
      for (int c = 0; c < dims; ++c) {
        const double g = clip(coeff * (emb(j, c) - emb(t, c)));
        emb(j, c) += g * alpha;
        emb(t, c) -= g * alpha;
      }
      next_sample[e] += edges[e].epochs_per_sample;
      const double per_negative = edges[e].epochs_per_sample / params.negative_sample_rate;
      const int n_neg = static_cast<int>((epoch - next_negative[e]) / per_negative);
      for (int s = 0; s < n_neg; ++s) {
        const auto o = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        if (o == j) continue;
        const double dn = (emb.row(j) - emb.row(o)).squaredNorm();
        double rep = 0.0;
        if (dn > 0.0) rep = 2.0 * b / ((0.001 + dn) * (a * std::pow(dn, b) + 1.0));
        for (int c = 0; c < dims; ++c) {
          const double g = rep > 0.0 ? clip(rep * (emb(j, c) - emb(o, c))) : 4.0;
          emb(j, c) += g * alpha;
        }
      }
      next_negative[e] += n_neg * per_negative;
    }
    alpha = 1.0 - static_cast<double>(epoch + 1) / params.n_epochs;
  }
  return emb;
}

}  // namespace scope::interpret
