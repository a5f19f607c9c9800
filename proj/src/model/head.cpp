// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/model/head.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "scope/util/error.hpp"

namespace scope::model {

std::string_view activation_name(Activation a) { return a == Activation::kRelu ? "relu" : "sigmoid"; }

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "sigmoid") return Activation::kSigmoid;
  throw InvalidArgument(fmt::format("unknown activation '{}'", name));
}

Matrix activate(const Matrix& x, Activation a) {
  if (a == Activation::kRelu) return x.cwiseMax(0.0);
  return (1.0 / (1.0 + (-x.array()).exp())).matrix();
}

namespace {

void check_ban_inputs(const Matrix& hd, const Matrix& hp, const BanWeights& w) {
  if (hd.rows() < 1 || hp.rows() < 1) throw InvalidArgument("attention: empty drug or protein rows");
  if (hd.cols() != w.u.rows() || hp.cols() != w.v.rows() || w.u.cols() != w.v.cols() || w.q.cols() != w.u.cols()) {
    throw InvalidArgument(fmt::format("attention: dims H_d {}x{}, H_p {}x{}, U {}x{}, V {}x{}, q {}x{}", hd.rows(),
                                      hd.cols(), hp.rows(), hp.cols(), w.u.rows(), w.u.cols(), w.v.rows(),
                                      w.v.cols(), w.q.rows(), w.q.cols()));
  }
}

Tensor activate(const Tensor& x, Activation a) { return a == Activation::kRelu ? nn::relu(x) : nn::sigmoid(x); }

}  // namespace

std::vector<Matrix> attention_map(const Matrix& hd, const Matrix& hp, const BanWeights& w) {
  check_ban_inputs(hd, hp, w);
  const Matrix a = activate(hd * w.u, w.activation);
  const Matrix b = activate(hp * w.v, w.activation);
  std::vector<Matrix> maps;
  for (Eigen::Index h = 0; h < w.q.rows(); ++h) {
    maps.push_back((a * w.q.row(h).asDiagonal()) * b.transpose());
  }
  return maps;
}

RowVector bilinear_pool(const Matrix& hd, const Matrix& hp, const std::vector<Matrix>& attention,
                        const BanWeights& w) {
  check_ban_inputs(hd, hp, w);
  if (attention.empty()) throw InvalidArgument("bilinear_pool: no attention heads");
  const Matrix a = activate(hd * w.u, w.activation);
  const Matrix b = activate(hp * w.v, w.activation);
  RowVector f = RowVector::Zero(a.cols());
  for (const auto& i : attention) {
    if (i.rows() != a.rows() || i.cols() != b.rows()) throw InvalidArgument("bilinear_pool: attention shape");
    f += (a.array() * (i * b).array()).colwise().sum().matrix();
  }
  return f / static_cast<double>(attention.size());
}

RowVector sum_pool(const RowVector& f, int s) {
  if (s < 1 || f.size() % s != 0) {
    throw InvalidArgument(fmt::format("sum_pool: window {} does not divide length {}", s, f.size()));
  }
  RowVector out(f.size() / s);
  for (Eigen::Index k = 0; k < out.size(); ++k) out(k) = f.segment(k * s, s).sum();
  return out;
}

double decode(const RowVector& f, const DecoderWeights& w) {
  if (!f.allFinite()) throw InvalidArgument("decode: non-finite input");
  if (f.size() != w.w1.rows()) throw InvalidArgument("decode: input dim mismatch");
  const RowVector hidden = (f * w.w1 + w.b1).cwiseMax(0.0);
  const double logit = (hidden * w.w2)(0, 0) + w.b2(0, 0);
  return 1.0 / (1.0 + std::exp(-logit));
}

double loss(const std::vector<double>& p, const std::vector<int>& y, double theta_sq, double lambda, double eps) {
  if (p.size() != y.size()) throw InvalidArgument("loss: size mismatch");
  if (lambda < 0.0) throw InvalidArgument("loss: negative lambda");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) throw InvalidArgument(fmt::format("loss: probability {} outside [0, 1]", p[i]));
    if (y[i] != 0 && y[i] != 1) throw InvalidArgument("loss: label must be 0 or 1");
    const double c = std::clamp(p[i], eps, 1.0 - eps);
    total -= y[i] == 1 ? std::log(c) : std::log(1.0 - c);
  }
  return total + 0.5 * lambda * theta_sq;
}

Tensor l2_penalty(const ParamStore& store, double lambda) {
  Tensor total;
  for (const auto& [name, t] : store.params()) {
    Tensor sq = nn::sum_squares(t);
    total = total.defined() ? nn::add(total, sq) : sq;
  }
  if (!total.defined()) return Tensor::constant(Matrix::Zero(1, 1));
  return nn::scale(total, 0.5 * lambda);
}

double squared_norm(const ParamStore& store) {
  double total = 0.0;
  for (const auto& [name, t] : store.params()) total += t.value().squaredNorm();
  return total;
}

BanHead::BanHead(ParamStore& store, const std::string& name, int drug_dim, int protein_dim, const HeadConfig& cfg,
                 Rng& rng)
    : pool_(cfg.pool), activation_(cfg.activation) {
  if (cfg.heads < 1) throw InvalidArgument("ban: need at least one head");
  if (cfg.pool < 1 || cfg.latent % cfg.pool != 0) {
    throw InvalidArgument(fmt::format("ban: pool window {} does not divide K = {}", cfg.pool, cfg.latent));
  }
  u_ = store.create(name + ".u", nn::uniform_fan_in(drug_dim, cfg.latent, rng));
  v_ = store.create(name + ".v", nn::uniform_fan_in(protein_dim, cfg.latent, rng));
  Matrix q(cfg.heads, cfg.latent);
  const double bound = 1.0 / std::sqrt(static_cast<double>(cfg.latent));
  for (Eigen::Index i = 0; i < q.size(); ++i) q.data()[i] = rng.uniform(-bound, bound);
  q_ = store.create(name + ".q", std::move(q));
  Matrix pool = Matrix::Zero(cfg.latent, cfg.latent / cfg.pool);
  for (int k = 0; k < cfg.latent; ++k) pool(k, k / cfg.pool) = 1.0;
  pool_matrix_ = Tensor::constant(std::move(pool));
}

Tensor BanHead::forward(const Encoded& drugs, const Encoded& proteins, const std::vector<int>& drug_of,
                        const std::vector<int>& protein_of) const {
  if (drug_of.size() != protein_of.size()) throw InvalidArgument("ban: pair index size mismatch");
  if (drugs.rows.cols() != u_.rows() || proteins.rows.cols() != v_.rows()) {
    throw InvalidArgument(fmt::format("ban: input dims {} / {} do not match U {} / V {}", drugs.rows.cols(),
                                      proteins.rows.cols(), u_.rows(), v_.rows()));
  }
  std::vector<RowRange> d(drug_of.size());
  std::vector<RowRange> p(protein_of.size());
  for (std::size_t i = 0; i < drug_of.size(); ++i) {
    d[i] = drugs.ranges.at(static_cast<std::size_t>(drug_of[i]));
    p[i] = proteins.ranges.at(static_cast<std::size_t>(protein_of[i]));
  }
  const Tensor a = activate(nn::matmul(drugs.rows, u_), activation_);
  const Tensor b = activate(nn::matmul(proteins.rows, v_), activation_);
  return nn::matmul(nn::bilinear_attention_pool(a, b, q_, d, p), pool_matrix_);
}

BanWeights BanHead::weights() const { return {u_.value(), v_.value(), q_.value(), activation_}; }

Decoder::Decoder(ParamStore& store, const std::string& name, int in, int hidden, Rng& rng)
    : hidden_(store, name + ".hidden", in, hidden, rng), out_(store, name + ".out", hidden, 1, rng) {}

Tensor Decoder::operator()(const Tensor& f) const { return out_(nn::relu(hidden_(f))); }

DecoderWeights Decoder::weights() const {
  return {hidden_.weight().value(), hidden_.bias().value(), out_.weight().value(), out_.bias().value()};
}

}  // namespace scope::model
