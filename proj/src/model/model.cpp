// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/model/model.hpp"

#include <fmt/format.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include "scope/util/error.hpp"
#include "scope/util/parallel.hpp"

namespace scope::model {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "checkpoint format assumes little-endian doubles");

namespace {

constexpr char kMagic[8] = {'S', 'C', 'O', 'P', 'E', 'C', 'K', '1'};

template <typename T>
void read_key(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string_view backbone_name(Backbone b) { return b == Backbone::kBan ? "ban" : "mlp"; }

Backbone parse_backbone(std::string_view name) {
  if (name == "ban") return Backbone::kBan;
  if (name == "mlp") return Backbone::kMlp;
  throw InvalidArgument(fmt::format("unknown backbone '{}'", name));
}

json ModelConfig::to_json() const {
  const auto& e = encoder;
  return {
      {"protein_variant", variant_name(protein)},
      {"compound_variant", variant_name(compound)},
      {"backbone", backbone_name(backbone)},
      {"encoder",
       {{"protein_dim", e.protein_dim},
        {"hgnn_layers", e.hgnn_layers},
        {"residue_vocab", e.residue_vocab},
        {"cnn_kernels", e.cnn_kernels},
        {"atom_features", e.atom_features},
        {"rbf", e.rbf},
        {"node_scalar", e.node_scalar},
        {"node_vector", e.node_vector},
        {"edge_scalar", e.edge_scalar},
        {"edge_vector", e.edge_vector},
        {"gvp_layers", e.gvp_layers},
        {"dropout", e.dropout},
        {"graph2d_layers", e.graph2d_layers},
        {"fingerprint_bits", e.fingerprint_bits},
        {"max_atoms", e.max_atoms}}},
      {"head",
       {{"latent", head.latent},
        {"heads", head.heads},
        {"pool", head.pool},
        {"hidden", head.hidden},
        {"activation", activation_name(head.activation)},
        {"lambda", head.lambda}}},
  };
}

ModelConfig ModelConfig::from_json(const json& j) {
  ModelConfig c;
  if (j.contains("protein_variant")) c.protein = parse_protein_variant(j.at("protein_variant").get<std::string>());
  if (j.contains("compound_variant")) c.compound = parse_compound_variant(j.at("compound_variant").get<std::string>());
  if (j.contains("backbone")) c.backbone = parse_backbone(j.at("backbone").get<std::string>());
  if (j.contains("encoder")) {
    const auto& e = j.at("encoder");
    auto& o = c.encoder;
    read_key(e, "protein_dim", o.protein_dim);
    read_key(e, "hgnn_layers", o.hgnn_layers);
    read_key(e, "residue_vocab", o.residue_vocab);
    read_key(e, "cnn_kernels", o.cnn_kernels);
    read_key(e, "atom_features", o.atom_features);
    read_key(e, "rbf", o.rbf);
    read_key(e, "node_scalar", o.node_scalar);
    read_key(e, "node_vector", o.node_vector);
    read_key(e, "edge_scalar", o.edge_scalar);
    read_key(e, "edge_vector", o.edge_vector);
    read_key(e, "gvp_layers", o.gvp_layers);
    read_key(e, "dropout", o.dropout);
    read_key(e, "graph2d_layers", o.graph2d_layers);
    read_key(e, "fingerprint_bits", o.fingerprint_bits);
    read_key(e, "max_atoms", o.max_atoms);
  }
  if (j.contains("head")) {
    const auto& h = j.at("head");
    read_key(h, "latent", c.head.latent);
    read_key(h, "heads", c.head.heads);
    read_key(h, "pool", c.head.pool);
    read_key(h, "hidden", c.head.hidden);
    read_key(h, "lambda", c.head.lambda);
    if (h.contains("activation")) c.head.activation = parse_activation(h.at("activation").get<std::string>());
  }
  return c;
}

DtiModel::DtiModel(const ModelConfig& config, std::uint64_t seed) : config_(config) {
  Rng rng = Rng::derive(seed, "model-init");
  protein_encoder_ = make_protein_encoder(config.protein, store_, config.encoder, rng);
  compound_encoder_ = make_compound_encoder(config.compound, store_, config.encoder, rng);
  int decoder_in = 0;
  if (config.backbone == Backbone::kBan) {
    ban_ = std::make_unique<BanHead>(store_, "head.ban", compound_encoder_->out_dim(), protein_encoder_->out_dim(),
                                     config.head, rng);
    decoder_in = ban_->out_dim();
  } else {
    decoder_in = compound_encoder_->out_dim() + protein_encoder_->out_dim();
  }
  decoder_ = std::make_unique<Decoder>(store_, "head.decoder", decoder_in, config.head.hidden, rng);
}

DtiModel::Encodings DtiModel::encode(const std::vector<PairInput>& pairs, const Context& ctx) const {
  if (pairs.empty()) throw InvalidArgument("model: empty batch");
  std::map<const featurize::ProteinGraph*, int> protein_slot;
  std::map<const featurize::CompoundFeatures*, int> compound_slot;
  std::vector<const featurize::ProteinGraph*> proteins;
  std::vector<const featurize::CompoundFeatures*> compounds;
  Encodings out;
  for (const auto& p : pairs) {
    if (p.protein == nullptr || p.compound == nullptr) throw InvalidArgument("model: pair without features");
    auto [pit, pnew] = protein_slot.emplace(p.protein, static_cast<int>(proteins.size()));
    if (pnew) proteins.push_back(p.protein);
    auto [cit, cnew] = compound_slot.emplace(p.compound, static_cast<int>(compounds.size()));
    if (cnew) compounds.push_back(p.compound);
    out.protein_of.push_back(pit->second);
    out.drug_of.push_back(cit->second);
  }
  out.proteins = protein_encoder_->encode(ProteinBatch::build(proteins), ctx);
  out.drugs = compound_encoder_->encode(MoleculeBatch::build(compounds), ctx);
  return out;
}

Tensor DtiModel::logits(const std::vector<PairInput>& pairs, const Context& ctx) const {
  const Encodings enc = encode(pairs, ctx);
  Tensor joint;
  if (ban_) {
    joint = ban_->forward(enc.drugs, enc.proteins, enc.drug_of, enc.protein_of);
  } else {
    // MLP backbone: drug rows summed, protein rows averaged, concatenated.
    const auto pooled = [](const Encoded& e, const std::vector<int>& of, bool mean) {
      std::vector<int> src;
      std::vector<int> dst;
      Matrix weight(0, 1);
      std::vector<double> w;
      for (std::size_t p = 0; p < of.size(); ++p) {
        const auto& r = e.ranges[static_cast<std::size_t>(of[p])];
        for (Eigen::Index i = 0; i < r.size; ++i) {
          src.push_back(static_cast<int>(r.start + i));
          dst.push_back(static_cast<int>(p));
        }
        w.push_back(mean ? 1.0 / static_cast<double>(r.size) : 1.0);
      }
      const Tensor sum = nn::propagate(e.rows, src, dst, static_cast<Eigen::Index>(of.size()));
      return nn::mul_col(sum, Tensor::constant(Eigen::Map<const Matrix>(w.data(), static_cast<Eigen::Index>(w.size()), 1)));
    };
    joint = nn::concat_cols({pooled(enc.drugs, enc.drug_of, false), pooled(enc.proteins, enc.protein_of, true)});
  }
  return (*decoder_)(joint);
}

std::vector<double> DtiModel::predict(const std::vector<PairInput>& pairs, std::size_t batch_size,
                                      unsigned workers) const {
  if (batch_size == 0) throw InvalidArgument("predict: batch size must be positive");
  std::vector<double> out(pairs.size());
  const std::size_t batches = (pairs.size() + batch_size - 1) / batch_size;
  parallel_for(batches, workers, [&](std::size_t b) {
    nn::NoGradGuard guard;
    const std::size_t lo = b * batch_size;
    const std::size_t hi = std::min(pairs.size(), lo + batch_size);
    const std::vector<PairInput> chunk(pairs.begin() + static_cast<std::ptrdiff_t>(lo),
                                       pairs.begin() + static_cast<std::ptrdiff_t>(hi));
    const Matrix z = logits(chunk, Context{}).value();
    for (std::size_t i = lo; i < hi; ++i) {
      out[i] = 1.0 / (1.0 + std::exp(-z(static_cast<Eigen::Index>(i - lo), 0)));
    }
  });
  return out;
}

DtiModel::PairRows DtiModel::encode_pair(const PairInput& pair) const {
  nn::NoGradGuard guard;
  const Encodings enc = encode({pair}, Context{});
  const auto& d = enc.drugs.ranges[0];
  const auto& p = enc.proteins.ranges[0];
  Eigen::Index drug_rows = d.size;
  if (config_.compound == CompoundVariant::kGvp3dUnpooled) {
    drug_rows = std::min<Eigen::Index>(drug_rows, pair.compound->graph.atom_scalar.rows());
  }
  return {enc.drugs.rows.value().middleRows(d.start, drug_rows), enc.proteins.rows.value().middleRows(p.start, p.size)};
}

BanWeights DtiModel::ban_weights() const {
  if (!ban_) throw InvalidArgument("model has no bilinear attention head");
  return ban_->weights();
}

std::vector<Matrix> DtiModel::attention(const PairInput& pair) const {
  const BanWeights w = ban_weights();
  const PairRows rows = encode_pair(pair);
  return attention_map(rows.drug, rows.protein, w);
}

void DtiModel::save(const std::filesystem::path& path, const json& metadata) const {
  json tensors = json::array();
  std::vector<const Matrix*> blobs;
  for (const auto& [name, t] : store_.params()) {
    tensors.push_back({{"name", name}, {"kind", "param"}, {"rows", t.rows()}, {"cols", t.cols()}});
    blobs.push_back(&t.value());
  }
  for (const auto& [name, b] : store_.buffers()) {
    tensors.push_back({{"name", name}, {"kind", "buffer"}, {"rows", b->rows()}, {"cols", b->cols()}});
    blobs.push_back(b.get());
  }
  const json manifest = {{"format_version", kCheckpointVersion},
                         {"config", config_.to_json()},
                         {"metadata", metadata},
                         {"tensors", tensors}};
  const std::string text = manifest.dump();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write checkpoint {}", path.string()));
  const std::uint64_t len = text.size();
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const Matrix* m : blobs) {
    out.write(reinterpret_cast<const char*>(m->data()), static_cast<std::streamsize>(m->size() * sizeof(double)));
  }
  if (!out) throw IoError(fmt::format("failed writing checkpoint {}", path.string()));
}

std::unique_ptr<DtiModel> DtiModel::load(const std::filesystem::path& path, json* metadata) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open checkpoint {}", path.string()));
  char magic[sizeof kMagic];
  std::uint64_t len = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0 || len > (1u << 30)) {
    throw ParseError(fmt::format("{} is not a scope checkpoint", path.string()));
  }
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  json manifest;
  try {
    manifest = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("checkpoint manifest: {}", e.what()));
  }
  if (manifest.value("format_version", 0) != kCheckpointVersion) {
    throw ParseError(fmt::format("checkpoint format version {} unsupported", manifest.value("format_version", 0)));
  }
  const std::uint64_t seed = manifest["metadata"].value("seed", std::uint64_t{0});
  auto model = std::make_unique<DtiModel>(ModelConfig::from_json(manifest.at("config")), seed);
  std::size_t loaded = 0;
  for (const auto& t : manifest.at("tensors")) {
    const auto name = t.at("name").get<std::string>();
    const auto rows = t.at("rows").get<Eigen::Index>();
    const auto cols = t.at("cols").get<Eigen::Index>();
    Matrix m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
    if (!in) throw ParseError(fmt::format("checkpoint truncated at tensor '{}'", name));
    Matrix* target = nullptr;
    if (t.at("kind") == "param") {
      Tensor p = model->store_.param(name);
      target = &p.mutable_value();
    } else {
      auto it = model->store_.buffers().find(name);
      if (it == model->store_.buffers().end()) throw ParseError(fmt::format("checkpoint: unknown buffer '{}'", name));
      target = it->second.get();
    }
    if (target->rows() != rows || target->cols() != cols) {
      throw ParseError(fmt::format("checkpoint: tensor '{}' has shape {}x{}, model expects {}x{}", name, rows, cols,
                                   target->rows(), target->cols()));
    }
    *target = std::move(m);
    ++loaded;
  }
  if (loaded != model->store_.params().size() + model->store_.buffers().size()) {
    throw ParseError("checkpoint: tensor count does not match the model");
  }
  if (metadata != nullptr) *metadata = manifest.value("metadata", json::object());
  return model;
}

}  // namespace scope::model
