// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/featurize/featurizer.hpp"

#include <fmt/format.h>

#include <cstring>
#include <fstream>

#include "scope/chem/smiles.hpp"
#include "scope/featurize/pdb.hpp"
#include "scope/util/error.hpp"
#include "scope/util/hash.hpp"
#include "scope/util/parallel.hpp"
#include "scope/util/text.hpp"

namespace scope::featurize {
namespace {

constexpr char kMagic[4] = {'S', 'C', 'P', 'F'};

class BlobWriter {
 public:
  template <typename T>
  void put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    out_.append(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void put_ints(const std::vector<int>& v) {
    put<std::uint64_t>(v.size());
    for (int x : v) put<std::int32_t>(x);
  }
  void put_matrix(const Matrix& m) {
    put<std::uint64_t>(static_cast<std::uint64_t>(m.rows()));
    put<std::uint64_t>(static_cast<std::uint64_t>(m.cols()));
    out_.append(reinterpret_cast<const char*>(m.data()), sizeof(double) * static_cast<std::size_t>(m.size()));
  }
  void put_edges(const EdgeList& e) {
    put_ints(e.src);
    put_ints(e.dst);
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class BlobReader {
 public:
  explicit BlobReader(std::string_view in) : in_(in) {}
  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::vector<int> get_ints() {
    const auto n = get<std::uint64_t>();
    need(n * 4);
    std::vector<int> v(n);
    for (auto& x : v) x = get<std::int32_t>();
    return v;
  }
  Matrix get_matrix() {
    const auto r = get<std::uint64_t>();
    const auto c = get<std::uint64_t>();
    need(r * c * sizeof(double));
    Matrix m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    std::memcpy(m.data(), in_.data() + pos_, r * c * sizeof(double));
    pos_ += r * c * sizeof(double);
    return m;
  }
  EdgeList get_edges() {
    EdgeList e;
    e.src = get_ints();
    e.dst = get_ints();
    if (e.src.size() != e.dst.size()) throw ParseError("feature blob: edge list length mismatch");
    return e;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw ParseError("feature blob: truncated");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

void put_header(BlobWriter& w, char kind) {
  for (char c : kMagic) w.put(c);
  w.put<std::uint32_t>(FeatureCache::kFormatVersion);
  w.put(kind);
}

void check_header(BlobReader& r, char kind) {
  for (char c : kMagic) {
    if (r.get<char>() != c) throw ParseError("feature blob: bad magic");
  }
  if (r.get<std::uint32_t>() != FeatureCache::kFormatVersion) throw ParseError("feature blob: version mismatch");
  if (r.get<char>() != kind) throw ParseError("feature blob: wrong entity kind");
}

std::optional<std::string> read_blob(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_blob(const std::filesystem::path& path, const std::string& blob) {
  // Write-then-rename so concurrent readers never see a partial blob.
  auto tmp = path;
  tmp += fmt::format(".tmp{}", std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write {}", tmp.string()));
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  }
  std::filesystem::rename(tmp, path);
}

std::string options_tag(const FeaturizeOptions& o) {
  return fmt::format("{}|{}|{}|{}|{}|{}|{}", o.protein_radius, o.max_sequence_length, o.molecule.cutoff,
                     o.molecule.n_rbf, o.molecule.canonical_order, o.fingerprint_radius, o.fingerprint_bits);
}

}  // namespace

ProteinGraph featurize_protein(const core::ProteinRecord& protein, const FeaturizeOptions& options) {
  if (protein.structure_path.empty()) {
    throw IoError(fmt::format("protein {} has no structure file", protein.protein_id));
  }
  const auto seq = core::truncate_sequence(protein.sequence, options.max_sequence_length);
  try {
    return build_protein_graph(seq, parse_protein_structure(protein.structure_path, seq), options.protein_radius);
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("protein {}: {}", protein.protein_id, e.what()));
  }
}

CompoundFeatures featurize_compound(const core::CompoundRecord& compound, const chem::ConformerAdapter* adapter,
                                    const FeaturizeOptions& options) {
  const auto mol = chem::parse_smiles(compound.smiles);
  std::vector<chem::Vec3> coords;
  if (compound.conformer_path && !compound.conformer_path->empty()) {
    coords = chem::heavy_atom_coords(chem::read_molblock(*compound.conformer_path), mol);
  } else if (adapter != nullptr) {
    coords = adapter->generate(mol, compound.smiles);
  } else {
    throw chem::ConformerError(
        fmt::format("compound {} has no conformer file and no conformer adapter is configured", compound.compound_id));
  }
  return {build_molecule_graph(mol, coords, options.molecule),
          morgan_fingerprint(mol, options.fingerprint_radius, options.fingerprint_bits)};
}

FeatureCache::FeatureCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string FeatureCache::protein_key(const core::ProteinRecord& protein, const FeaturizeOptions& options) const {
  return sha256_hex(fmt::format("protein|v{}|{}|{}|{}", kFormatVersion, options_tag(options), protein.sequence,
                                sha256_file(protein.structure_path)));
}

std::string FeatureCache::compound_key(const core::CompoundRecord& compound, const chem::ConformerAdapter* adapter,
                                       const FeaturizeOptions& options) const {
  std::string geometry;
  if (compound.conformer_path && !compound.conformer_path->empty()) {
    geometry = "file:" + sha256_file(*compound.conformer_path);
  } else {
    geometry = "adapter:" + (adapter ? adapter->name() : std::string("none"));
  }
  return sha256_hex(
      fmt::format("compound|v{}|{}|{}|{}", kFormatVersion, options_tag(options), compound.smiles, geometry));
}

std::string serialize_protein(const ProteinGraph& g) {
  BlobWriter w;
  put_header(w, 'P');
  w.put(g.d_r);
  w.put_ints(g.residue_types);
  w.put_matrix(g.residue_centroids);
  for (const auto& e : g.edges_by_type) w.put_edges(e);
  return w.take();
}

ProteinGraph deserialize_protein(std::string_view blob) {
  BlobReader r(blob);
  check_header(r, 'P');
  ProteinGraph g;
  g.d_r = r.get<double>();
  g.residue_types = r.get_ints();
  g.residue_centroids = r.get_matrix();
  for (auto& e : g.edges_by_type) e = r.get_edges();
  if (!r.done()) throw ParseError("feature blob: trailing bytes");
  return g;
}

std::string serialize_compound(const CompoundFeatures& f) {
  BlobWriter w;
  put_header(w, 'C');
  w.put_matrix(f.graph.atom_scalar);
  w.put_matrix(f.graph.atom_coords);
  w.put_edges(f.graph.edges);
  w.put_matrix(f.graph.edge_vec);
  w.put_matrix(f.graph.edge_rbf);
  w.put_edges(f.graph.bonds);
  w.put<std::uint64_t>(f.fingerprint.size());
  for (auto word : f.fingerprint.words()) w.put(word);
  return w.take();
}

CompoundFeatures deserialize_compound(std::string_view blob) {
  BlobReader r(blob);
  check_header(r, 'C');
  CompoundFeatures f;
  f.graph.atom_scalar = r.get_matrix();
  f.graph.atom_coords = r.get_matrix();
  f.graph.edges = r.get_edges();
  f.graph.edge_vec = r.get_matrix();
  f.graph.edge_rbf = r.get_matrix();
  f.graph.bonds = r.get_edges();
  const auto n_bits = r.get<std::uint64_t>();
  f.fingerprint = BitVector(n_bits);
  for (std::size_t k = 0; k < (n_bits + 63) / 64; ++k) {
    const auto word = r.get<std::uint64_t>();
    for (std::size_t b = 0; b < 64; ++b) {
      if ((word >> b) & 1ULL) f.fingerprint.set(k * 64 + b);
    }
  }
  if (!r.done()) throw ParseError("feature blob: trailing bytes");
  return f;
}

std::optional<ProteinGraph> FeatureCache::load_protein(const std::string& key) const {
  auto blob = read_blob(dir_ / (key + ".bin"));
  if (!blob) return std::nullopt;
  try {
    return deserialize_protein(*blob);
  } catch (const ParseError&) {
    return std::nullopt;  // stale or corrupt entry; recompute
  }
}

void FeatureCache::store_protein(const std::string& key, const ProteinGraph& graph) const {
  write_blob(dir_ / (key + ".bin"), serialize_protein(graph));
}

std::optional<CompoundFeatures> FeatureCache::load_compound(const std::string& key) const {
  auto blob = read_blob(dir_ / (key + ".bin"));
  if (!blob) return std::nullopt;
  try {
    return deserialize_compound(*blob);
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

void FeatureCache::store_compound(const std::string& key, const CompoundFeatures& features) const {
  write_blob(dir_ / (key + ".bin"), serialize_compound(features));
}

const ProteinGraph& FeatureStore::protein(const std::string& id) const {
  auto it = proteins.find(id);
  if (it == proteins.end()) throw InvalidArgument(fmt::format("no features for protein {}", id));
  return *it->second;
}

const CompoundFeatures& FeatureStore::compound(const std::string& id) const {
  auto it = compounds.find(id);
  if (it == compounds.end()) throw InvalidArgument(fmt::format("no features for compound {}", id));
  return *it->second;
}

FeatureStore featurize_corpus(const core::Corpus& corpus, const FeaturizeRun& run) {
  std::vector<const core::ProteinRecord*> proteins;
  for (const auto& [id, p] : corpus.proteins) proteins.push_back(&p);
  std::vector<const core::CompoundRecord*> compounds;
  for (const auto& [id, c] : corpus.compounds) compounds.push_back(&c);

  std::vector<std::shared_ptr<const ProteinGraph>> pg(proteins.size());
  parallel_for(proteins.size(), run.workers, [&](std::size_t i) {
    const auto& p = *proteins[i];
    if (run.cache) {
      const auto key = run.cache->protein_key(p, run.options);
      if (auto hit = run.cache->load_protein(key)) {
        pg[i] = std::make_shared<ProteinGraph>(std::move(*hit));
        return;
      }
      auto g = featurize_protein(p, run.options);
      run.cache->store_protein(key, g);
      pg[i] = std::make_shared<ProteinGraph>(std::move(g));
    } else {
      pg[i] = std::make_shared<ProteinGraph>(featurize_protein(p, run.options));
    }
  });
  std::vector<std::shared_ptr<const CompoundFeatures>> cf(compounds.size());
  parallel_for(compounds.size(), run.workers, [&](std::size_t i) {
    const auto& c = *compounds[i];
    if (run.cache) {
      const auto key = run.cache->compound_key(c, run.adapter, run.options);
      if (auto hit = run.cache->load_compound(key)) {
        cf[i] = std::make_shared<CompoundFeatures>(std::move(*hit));
        return;
      }
      auto f = featurize_compound(c, run.adapter, run.options);
      run.cache->store_compound(key, f);
      cf[i] = std::make_shared<CompoundFeatures>(std::move(f));
    } else {
      cf[i] = std::make_shared<CompoundFeatures>(featurize_compound(c, run.adapter, run.options));
    }
  });

  FeatureStore store;
  for (std::size_t i = 0; i < proteins.size(); ++i) store.proteins.emplace(proteins[i]->protein_id, pg[i]);
  for (std::size_t i = 0; i < compounds.size(); ++i) store.compounds.emplace(compounds[i]->compound_id, cf[i]);
  return store;
}

}  // namespace scope::featurize
