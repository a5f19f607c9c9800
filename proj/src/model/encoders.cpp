// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/model/encoders.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "scope/util/error.hpp"

namespace scope::model {

using nn::Linear;

namespace {

constexpr std::array<std::string_view, 3> kProteinVariantNames{"hgnn3d", "onehot1d", "cnn1d"};
constexpr std::array<std::string_view, 4> kCompoundVariantNames{"gvp3d_pooled", "gvp3d_unpooled", "graph2d",
                                                                "fingerprint1d"};

std::vector<RowRange> unit_ranges(std::size_t n) {
  std::vector<RowRange> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = {static_cast<Eigen::Index>(i), 1};
  return r;
}

VectorChannels vec_map(const VectorChannels& v, const auto& f) { return {f(v.x), f(v.y), f(v.z)}; }

VectorChannels vec_concat(const VectorChannels& a, const VectorChannels& b) {
  return {nn::concat_cols({a.x, b.x}), nn::concat_cols({a.y, b.y}), nn::concat_cols({a.z, b.z})};
}

Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

}  // namespace

std::string_view variant_name(ProteinVariant v) { return kProteinVariantNames[static_cast<std::size_t>(v)]; }
std::string_view variant_name(CompoundVariant v) { return kCompoundVariantNames[static_cast<std::size_t>(v)]; }

ProteinVariant parse_protein_variant(std::string_view name) {
  for (std::size_t i = 0; i < kProteinVariantNames.size(); ++i) {
    if (kProteinVariantNames[i] == name) return static_cast<ProteinVariant>(i);
  }
  throw InvalidArgument(fmt::format("unknown protein variant '{}'", name));
}

CompoundVariant parse_compound_variant(std::string_view name) {
  for (std::size_t i = 0; i < kCompoundVariantNames.size(); ++i) {
    if (kCompoundVariantNames[i] == name) return static_cast<CompoundVariant>(i);
  }
  throw InvalidArgument(fmt::format("unknown compound variant '{}'", name));
}

// ---------------------------------------------------------------- HGNN

Hgnn::Hgnn(ParamStore& store, const std::string& name, int vocab, int dim, int layers, Rng& rng) {
  embedding_ = store.create(name + ".embedding", normal_matrix(vocab, dim, rng));
  for (int l = 0; l < layers; ++l) {
    const std::string p = fmt::format("{}.layer{}", name, l);
    Layer layer;
    for (int r = 0; r < featurize::kNumProteinEdgeTypes; ++r) {
      const auto type = featurize::edge_type_name(static_cast<featurize::ProteinEdgeType>(r));
      layer.w_r[static_cast<std::size_t>(r)] = Linear(store, fmt::format("{}.w_r.{}", p, type), dim, dim, rng, false);
    }
    layer.w_h = Linear(store, p + ".w_h", dim, dim, rng);
    layer.bn = nn::BatchNorm(store, p + ".bn", dim);
    layers_.push_back(std::move(layer));
  }
}

Tensor Hgnn::forward(const ProteinBatch& batch, const Context& ctx) const {
  const auto vocab = static_cast<int>(embedding_.rows());
  for (int t : batch.residue_types) {
    if (t < 0 || t >= vocab) throw InvalidArgument(fmt::format("residue index {} outside embedding", t));
  }
  const auto m = batch.num_residues();
  Tensor h = nn::gather_rows(embedding_, batch.residue_types);
  for (const auto& layer : layers_) {
    Tensor agg;
    for (std::size_t r = 0; r < batch.edges.size(); ++r) {
      const auto& e = batch.edges[r];
      Tensor msg = nn::propagate(layer.w_r[r](h), e.src, e.dst, m);
      agg = agg.defined() ? nn::add(agg, msg) : msg;
    }
    h = layer.bn(nn::relu(layer.w_h(agg)), ctx);
  }
  return h;
}

// ---------------------------------------------------------------- GVP

Gvp::Gvp(ParamStore& store, const std::string& name, int scalar_in, int vector_in, int scalar_out,
         int vector_out, Rng& rng, bool activations)
    : activations_(activations) {
  const int h = std::max(vector_in, vector_out);
  w_h_ = store.create(name + ".w_h", nn::uniform_fan_in(vector_in, h, rng));
  w_mu_ = store.create(name + ".w_mu", nn::uniform_fan_in(h, vector_out, rng));
  w_s_ = Linear(store, name + ".w_s", h + scalar_in, scalar_out, rng);
}

std::pair<Tensor, VectorChannels> Gvp::operator()(const Tensor& s, const VectorChannels& v) const {
  if (v.channels() != w_h_.rows() || s.cols() + w_h_.cols() != w_s_.in_dim()) {
    throw InvalidArgument(fmt::format("gvp: expected [{}, {}] input channels, got [{}, {}]",
                                      w_s_.in_dim() - w_h_.cols(), w_h_.rows(), s.cols(), v.channels()));
  }
  const VectorChannels vh = vec_map(v, [&](const Tensor& c) { return nn::matmul(c, w_h_); });
  const VectorChannels vmu = vec_map(vh, [&](const Tensor& c) { return nn::matmul(c, w_mu_); });
  Tensor s_out = w_s_(nn::concat_cols({nn::norm3(vh.x, vh.y, vh.z), s}));
  if (!activations_) return {s_out, vmu};
  const Tensor gate = nn::sigmoid(nn::norm3(vmu.x, vmu.y, vmu.z));
  return {nn::relu(s_out), vec_map(vmu, [&](const Tensor& c) { return nn::mul(c, gate); })};
}

GvpLayer::GvpLayer(ParamStore& store, const std::string& name, const EncoderConfig& cfg, Rng& rng)
    : message_(store, name + ".message", cfg.node_scalar + cfg.edge_scalar, cfg.node_vector + cfg.edge_vector,
               cfg.node_scalar, cfg.node_vector, rng, true),
      update_(store, name + ".update", 2 * cfg.node_scalar, 2 * cfg.node_vector, cfg.node_scalar, cfg.node_vector,
              rng, true),
      dropout_(cfg.dropout) {}

std::pair<Tensor, VectorChannels> GvpLayer::operator()(const Tensor& s, const VectorChannels& v,
                                                       const featurize::EdgeList& edges, const Tensor& edge_s,
                                                       const VectorChannels& edge_v, const Context& ctx) const {
  const auto n = s.rows();
  const auto gather = [&](const Tensor& t) { return nn::gather_rows(t, edges.src); };
  const auto scatter = [&](const Tensor& t) { return nn::scatter_add_rows(t, edges.dst, n); };
  auto [ms, mv] = message_(nn::concat_cols({gather(s), edge_s}), vec_concat(vec_map(v, gather), edge_v));
  const Tensor agg_s = scatter(ms);
  const VectorChannels agg_v = vec_map(mv, scatter);
  auto [us, uv] = update_(nn::concat_cols({s, agg_s}), vec_concat(v, agg_v));
  if (ctx.training && dropout_ > 0.0) {
    if (ctx.rng == nullptr) throw InvalidArgument("dropout in training mode needs a generator");
    us = nn::dropout(us, dropout_, ctx);
    const Tensor mask = Tensor::constant(nn::dropout_mask(n, uv.channels(), dropout_, *ctx.rng));
    uv = vec_map(uv, [&](const Tensor& c) { return nn::mul(c, mask); });
  }
  return {nn::add(s, us), {nn::add(v.x, uv.x), nn::add(v.y, uv.y), nn::add(v.z, uv.z)}};
}

GvpNetwork::GvpNetwork(ParamStore& store, const std::string& name, const EncoderConfig& cfg, Rng& rng)
    : node_embed_(store, name + ".node_embed", cfg.atom_features, 1, cfg.node_scalar, cfg.node_vector, rng, false),
      edge_embed_(store, name + ".edge_embed", cfg.rbf, 1, cfg.edge_scalar, cfg.edge_vector, rng, false) {
  for (int l = 0; l < cfg.gvp_layers; ++l) layers_.emplace_back(store, fmt::format("{}.layer{}", name, l), cfg, rng);
}

std::pair<Tensor, VectorChannels> GvpNetwork::forward(const MoleculeBatch& batch, const Context& ctx) const {
  const auto col = [](const Matrix& m, int c) { return Tensor::constant(m.col(c)); };
  const VectorChannels node_v{col(batch.coords, 0), col(batch.coords, 1), col(batch.coords, 2)};
  const VectorChannels edge_v{col(batch.edge_vec, 0), col(batch.edge_vec, 1), col(batch.edge_vec, 2)};
  auto [s, v] = node_embed_(Tensor::constant(batch.atom_scalar), node_v);
  auto [es, ev] = edge_embed_(Tensor::constant(batch.edge_rbf), edge_v);
  for (const auto& layer : layers_) std::tie(s, v) = layer(s, v, batch.edges, es, ev, ctx);
  return {s, v};
}

Tensor global_add_pool(const Tensor& nodes, const std::vector<RowRange>& ranges) {
  std::vector<int> owner(static_cast<std::size_t>(nodes.rows()), -1);
  for (std::size_t g = 0; g < ranges.size(); ++g) {
    if (ranges[g].size < 1) throw InvalidArgument("global_add_pool: graph with no nodes");
    for (Eigen::Index i = 0; i < ranges[g].size; ++i) {
      owner[static_cast<std::size_t>(ranges[g].start + i)] = static_cast<int>(g);
    }
  }
  std::vector<int> src;
  std::vector<int> dst;
  for (std::size_t i = 0; i < owner.size(); ++i) {
    if (owner[i] < 0) continue;
    src.push_back(static_cast<int>(i));
    dst.push_back(owner[i]);
  }
  return nn::propagate(nodes, src, dst, static_cast<Eigen::Index>(ranges.size()));
}

// ---------------------------------------------------------------- variants

namespace {

class HgnnEncoder final : public ProteinEncoder {
 public:
  HgnnEncoder(ParamStore& store, const EncoderConfig& cfg, Rng& rng)
      : hgnn_(store, "protein.hgnn", cfg.residue_vocab, cfg.protein_dim, cfg.hgnn_layers, rng),
        dim_(cfg.protein_dim) {}
  Encoded encode(const ProteinBatch& batch, const Context& ctx) const override {
    return {hgnn_.forward(batch, ctx), batch.ranges};
  }
  int out_dim() const override { return dim_; }

 private:
  Hgnn hgnn_;
  int dim_;
};

class OnehotEncoder final : public ProteinEncoder {
 public:
  OnehotEncoder(ParamStore& store, const EncoderConfig& cfg, Rng& rng)
      : proj_(store, "protein.onehot", cfg.residue_vocab, cfg.protein_dim, rng),
        vocab_(cfg.residue_vocab),
        dim_(cfg.protein_dim) {}
  Encoded encode(const ProteinBatch& batch, const Context&) const override {
    Matrix onehot = Matrix::Zero(batch.num_residues(), vocab_);
    for (std::size_t i = 0; i < batch.residue_types.size(); ++i) {
      const int t = batch.residue_types[i];
      if (t < 0 || t >= vocab_) throw InvalidArgument(fmt::format("residue index {} outside vocabulary", t));
      onehot(static_cast<Eigen::Index>(i), t) = 1.0;
    }
    return {proj_(Tensor::constant(std::move(onehot))), batch.ranges};
  }
  int out_dim() const override { return dim_; }

 private:
  Linear proj_;
  int vocab_;
  int dim_;
};

// Three convolution blocks (conv, ReLU, BN) over a learned embedding. Windows
// straddling two proteins of the batch are dropped; short sequences are
// padded with the unknown-residue token so every block has output rows.
class CnnEncoder final : public ProteinEncoder {
 public:
  CnnEncoder(ParamStore& store, const EncoderConfig& cfg, Rng& rng)
      : kernels_(cfg.cnn_kernels), unknown_(cfg.residue_vocab - 1), dim_(cfg.protein_dim) {
    embedding_ = store.create("protein.cnn.embedding", normal_matrix(cfg.residue_vocab, dim_, rng));
    for (std::size_t b = 0; b < kernels_.size(); ++b) {
      const std::string p = fmt::format("protein.cnn.block{}", b);
      convs_[b] = Linear(store, p + ".conv", static_cast<Eigen::Index>(kernels_[b]) * dim_, dim_, rng);
      bns_[b] = nn::BatchNorm(store, p + ".bn", dim_);
    }
  }
  Encoded encode(const ProteinBatch& batch, const Context& ctx) const override {
    Eigen::Index min_len = 1;
    for (int k : kernels_) min_len += k - 1;
    std::vector<int> types;
    std::vector<RowRange> ranges;
    for (const auto& r : batch.ranges) {
      const auto start = static_cast<Eigen::Index>(types.size());
      for (Eigen::Index i = 0; i < r.size; ++i) {
        const int t = batch.residue_types[static_cast<std::size_t>(r.start + i)];
        if (t < 0 || t > unknown_) throw InvalidArgument(fmt::format("residue index {} outside vocabulary", t));
        types.push_back(t);
      }
      const auto len = std::max(r.size, min_len);
      types.resize(static_cast<std::size_t>(start + len), unknown_);
      ranges.push_back({start, len});
    }
    Tensor h = nn::gather_rows(embedding_, types);
    for (std::size_t b = 0; b < kernels_.size(); ++b) {
      const int k = kernels_[b];
      std::vector<int> windows;
      std::vector<RowRange> next;
      for (const auto& r : ranges) {
        next.push_back({static_cast<Eigen::Index>(windows.size()), r.size - k + 1});
        for (Eigen::Index t = 0; t + k <= r.size; ++t) windows.push_back(static_cast<int>(r.start + t));
      }
      h = bns_[b](nn::relu(convs_[b](nn::gather_rows(nn::unfold(h, k), windows))), ctx);
      ranges = std::move(next);
    }
    return {h, ranges};
  }
  int out_dim() const override { return dim_; }

 private:
  std::array<int, 3> kernels_;
  int unknown_;
  int dim_;
  Tensor embedding_;
  std::array<Linear, 3> convs_;
  std::array<nn::BatchNorm, 3> bns_;
};

class GvpEncoder final : public CompoundEncoder {
 public:
  GvpEncoder(ParamStore& store, const EncoderConfig& cfg, Rng& rng, bool pooled)
      : net_(store, "compound.gvp", cfg, rng), dim_(cfg.node_scalar), pooled_(pooled), max_atoms_(cfg.max_atoms) {}
  Encoded encode(const MoleculeBatch& batch, const Context& ctx) const override {
    const Tensor s = net_.forward(batch, ctx).first;
    if (pooled_) return {global_add_pool(s, batch.ranges), unit_ranges(batch.size())};
    // Per-atom rows, truncated or zero-padded to max_atoms per molecule.
    std::vector<int> index;
    std::vector<RowRange> ranges;
    for (const auto& r : batch.ranges) {
      ranges.push_back({static_cast<Eigen::Index>(index.size()), max_atoms_});
      for (Eigen::Index t = 0; t < max_atoms_; ++t) index.push_back(t < r.size ? static_cast<int>(r.start + t) : -1);
    }
    return {nn::gather_rows(s, index), ranges};
  }
  int out_dim() const override { return dim_; }

 private:
  GvpNetwork net_;
  int dim_;
  bool pooled_;
  Eigen::Index max_atoms_;
};

// Message passing over covalent bonds: h <- h + ReLU(W (h + sum_bonded h)).
class Graph2dEncoder final : public CompoundEncoder {
 public:
  Graph2dEncoder(ParamStore& store, const EncoderConfig& cfg, Rng& rng)
      : input_(store, "compound.graph2d.input", cfg.atom_features, cfg.node_scalar, rng), dim_(cfg.node_scalar) {
    for (int l = 0; l < cfg.graph2d_layers; ++l) {
      layers_.emplace_back(store, fmt::format("compound.graph2d.layer{}", l), dim_, dim_, rng);
    }
  }
  Encoded encode(const MoleculeBatch& batch, const Context&) const override {
    Tensor h = input_(Tensor::constant(batch.atom_scalar));
    for (const auto& layer : layers_) {
      const Tensor agg = nn::propagate(h, batch.bonds.src, batch.bonds.dst, h.rows());
      h = nn::add(h, nn::relu(layer(nn::add(h, agg))));
    }
    return {global_add_pool(h, batch.ranges), unit_ranges(batch.size())};
  }
  int out_dim() const override { return dim_; }

 private:
  Linear input_;
  std::vector<Linear> layers_;
  int dim_;
};

class FingerprintEncoder final : public CompoundEncoder {
 public:
  FingerprintEncoder(ParamStore& store, const EncoderConfig& cfg, Rng& rng)
      : proj_(store, "compound.fingerprint", cfg.fingerprint_bits, cfg.node_scalar, rng),
        bits_(cfg.fingerprint_bits),
        dim_(cfg.node_scalar) {}
  Encoded encode(const MoleculeBatch& batch, const Context&) const override {
    if (batch.fingerprints.cols() != bits_) {
      throw InvalidArgument(fmt::format("fingerprint width {} != {}", batch.fingerprints.cols(), bits_));
    }
    return {proj_(Tensor::constant(batch.fingerprints)), unit_ranges(batch.size())};
  }
  int out_dim() const override { return dim_; }

 private:
  Linear proj_;
  Eigen::Index bits_;
  int dim_;
};

}  // namespace

std::unique_ptr<ProteinEncoder> make_protein_encoder(ProteinVariant variant, ParamStore& store,
                                                     const EncoderConfig& cfg, Rng& rng) {
  switch (variant) {
    case ProteinVariant::kHgnn3d:
      return std::make_unique<HgnnEncoder>(store, cfg, rng);
    case ProteinVariant::kOnehot1d:
      return std::make_unique<OnehotEncoder>(store, cfg, rng);
    case ProteinVariant::kCnn1d:
      return std::make_unique<CnnEncoder>(store, cfg, rng);
  }
  throw InvalidArgument("unknown protein variant");
}

std::unique_ptr<CompoundEncoder> make_compound_encoder(CompoundVariant variant, ParamStore& store,
                                                       const EncoderConfig& cfg, Rng& rng) {
  switch (variant) {
    case CompoundVariant::kGvp3dPooled:
      return std::make_unique<GvpEncoder>(store, cfg, rng, true);
    case CompoundVariant::kGvp3dUnpooled:
      return std::make_unique<GvpEncoder>(store, cfg, rng, false);
    case CompoundVariant::kGraph2d:
      return std::make_unique<Graph2dEncoder>(store, cfg, rng);
    case CompoundVariant::kFingerprint1d:
      return std::make_unique<FingerprintEncoder>(store, cfg, rng);
  }
  throw InvalidArgument("unknown compound variant");
}

}  // namespace scope::model
