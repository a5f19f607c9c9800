// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scope/model/batch.hpp"
#include "scope/nn/layers.hpp"

namespace scope::model {

using nn::Context;
using nn::ParamStore;
using nn::Tensor;

enum class ProteinVariant { kHgnn3d, kOnehot1d, kCnn1d };
enum class CompoundVariant { kGvp3dPooled, kGvp3dUnpooled, kGraph2d, kFingerprint1d };

std::string_view variant_name(ProteinVariant v);
std::string_view variant_name(CompoundVariant v);
ProteinVariant parse_protein_variant(std::string_view name);    // InvalidArgument on unknown
CompoundVariant parse_compound_variant(std::string_view name);  // InvalidArgument on unknown

struct EncoderConfig {
  int protein_dim = 320;
  int hgnn_layers = 4;
  int residue_vocab = 21;
  std::array<int, 3> cnn_kernels{3, 6, 9};

  int atom_features = 74;
  int rbf = 16;
  int node_scalar = 320;
  int node_vector = 64;
  int edge_scalar = 32;
  int edge_vector = 1;
  int gvp_layers = 3;
  double dropout = 0.1;
  int graph2d_layers = 3;
  int fingerprint_bits = 2048;
  int max_atoms = 300;
};

// Encoded rows for a batch: entity e owns rows ranges[e] of `rows`.
struct Encoded {
  Tensor rows;
  std::vector<RowRange> ranges;
};

// HGNN update: h^(l)_m = BN(ReLU(W_h sum_r sum_{n in N_r(m)} W_r h^(l-1)_n)).
// W_h carries a bias (a "fully connected layer"); no self term is added.
class Hgnn {
 public:
  Hgnn(ParamStore& store, const std::string& name, int vocab, int dim, int layers, Rng& rng);
  Tensor forward(const ProteinBatch& batch, const Context& ctx) const;

 private:
  struct Layer {
    std::array<nn::Linear, featurize::kNumProteinEdgeTypes> w_r;
    nn::Linear w_h;
    nn::BatchNorm bn;
  };
  Tensor embedding_;
  std::vector<Layer> layers_;
};

// Vector channels as three N x C matrices, one per spatial component.
struct VectorChannels {
  Tensor x, y, z;
  Eigen::Index channels() const { return x.cols(); }
};

// Geometric vector perceptron: (s, V) -> (s', V'). Scalars see vector norms;
// vectors only pass through channel-mixing linear maps and norm gates, so
// they rotate with the input.
class Gvp {
 public:
  Gvp(ParamStore& store, const std::string& name, int scalar_in, int vector_in, int scalar_out, int vector_out,
      Rng& rng, bool activations);
  std::pair<Tensor, VectorChannels> operator()(const Tensor& s, const VectorChannels& v) const;

 private:
  Tensor w_h_;
  Tensor w_mu_;
  nn::Linear w_s_;
  bool activations_;
};

// GVP message-passing layer: h_i <- h_i + GVP_out(h_i, sum_{j in N(i)} GVP_in(h_j, e_ji)).
class GvpLayer {
 public:
  GvpLayer(ParamStore& store, const std::string& name, const EncoderConfig& cfg, Rng& rng);
  std::pair<Tensor, VectorChannels> operator()(const Tensor& s, const VectorChannels& v,
                                               const featurize::EdgeList& edges, const Tensor& edge_s,
                                               const VectorChannels& edge_v, const Context& ctx) const;

 private:
  Gvp message_;
  Gvp update_;
  double dropout_;
};

// Embedding GVPs followed by the residual message-passing layers.
class GvpNetwork {
 public:
  GvpNetwork(ParamStore& store, const std::string& name, const EncoderConfig& cfg, Rng& rng);
  std::pair<Tensor, VectorChannels> forward(const MoleculeBatch& batch, const Context& ctx) const;

 private:
  Gvp node_embed_;
  Gvp edge_embed_;
  std::vector<GvpLayer> layers_;
};

// Global add pooling: per-graph sum of node rows.
Tensor global_add_pool(const Tensor& nodes, const std::vector<RowRange>& ranges);

class ProteinEncoder {
 public:
  virtual ~ProteinEncoder() = default;
  virtual Encoded encode(const ProteinBatch& batch, const Context& ctx) const = 0;
  virtual int out_dim() const = 0;
};

class CompoundEncoder {
 public:
  virtual ~CompoundEncoder() = default;
  virtual Encoded encode(const MoleculeBatch& batch, const Context& ctx) const = 0;
  virtual int out_dim() const = 0;
};

std::unique_ptr<ProteinEncoder> make_protein_encoder(ProteinVariant variant, ParamStore& store,
                                                     const EncoderConfig& cfg, Rng& rng);
std::unique_ptr<CompoundEncoder> make_compound_encoder(CompoundVariant variant, ParamStore& store,
                                                       const EncoderConfig& cfg, Rng& rng);

}  // namespace scope::model
