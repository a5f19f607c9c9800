// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/service/service.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

#include "scope/chem/smiles.hpp"
#include "scope/core/corpus_io.hpp"
#include "scope/curation/curation.hpp"
#include "scope/service/archive.hpp"
#include "scope/util/config.hpp"
#include "scope/util/parallel.hpp"
#include "scope/util/text.hpp"

namespace scope::service {

using nlohmann::json;

json SearchHit::to_json() const {
  return {{"compound_id", compound_id}, {"smiles", smiles}, {"similarity", similarity}};
}

json PredictionRow::to_json() const {
  return {{"rank", rank},
          {"protein_id", protein_id},
          {"family", family},
          {"score", score},
          {"per_model_scores", per_model_scores}};
}

void rank_rows(std::vector<PredictionRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const PredictionRow& a, const PredictionRow& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.protein_id < b.protein_id;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = static_cast<int>(i + 1);
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
  const auto kv = KeyValueConfig::load(path);
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };
  ServiceConfig c;
  c.host = kv.get_or("service", "host", c.host);
  c.port = static_cast<int>(kv.get_int("service", "port", c.port));
  const auto corpus = kv.get("service", "corpus");
  if (!corpus) throw ParseError(fmt::format("{}: [service] corpus is required", path.string()));
  c.corpus_dir = resolve(*corpus);
  for (const auto& part : split(kv.get_or("service", "checkpoints", ""), ',')) {
    const auto p = trim(part);
    if (!p.empty()) c.checkpoints.push_back(resolve(std::string(p)));
  }
  if (auto v = kv.get("service", "split_manifest")) c.split_manifest = resolve(*v);
  if (auto v = kv.get("service", "feature_cache")) c.feature_cache = resolve(*v);
  if (auto v = kv.get("service", "static_dir")) c.static_dir = resolve(*v);
  c.conformer = kv.get_or("service", "conformer", c.conformer);
  c.workers = static_cast<unsigned>(std::max<long long>(1, kv.get_int("service", "workers", 1)));
  if (c.port <= 0 || c.port > 65535) throw ParseError(fmt::format("{}: port {} out of range", path.string(), c.port));
  return c;
}

ServiceCore::ServiceCore(Parts parts)
    : corpus_(std::move(parts.corpus)),
      corpus_hash_(core::corpus_hash(corpus_)),
      models_(std::move(parts.models)),
      adapter_(std::move(parts.adapter)),
      manifest_(std::move(parts.manifest)),
      options_(parts.options),
      workers_(std::max(1u, parts.workers)) {
  for (const auto& [id, c] : corpus_.compounds) compound_ids_.push_back(id);
  fingerprints_.resize(compound_ids_.size());
  parallel_for(compound_ids_.size(), workers_, [&](std::size_t i) {
    fingerprints_[i] = featurize::fingerprint(corpus_.compounds.at(compound_ids_[i]).smiles,
                                              options_.fingerprint_radius, options_.fingerprint_bits);
  });
  if (models_.empty()) return;  // search and export need no protein features
  for (const auto& [id, p] : corpus_.proteins) protein_ids_.push_back(id);
  library_.resize(protein_ids_.size());
  const featurize::FeatureCache* cache = parts.cache;
  parallel_for(protein_ids_.size(), workers_, [&](std::size_t i) {
    const auto& record = corpus_.proteins.at(protein_ids_[i]);
    if (cache != nullptr) {
      const auto key = cache->protein_key(record, options_);
      if (auto hit = cache->load_protein(key)) {
        library_[i] = std::move(*hit);
        return;
      }
      library_[i] = featurize::featurize_protein(record, options_);
      cache->store_protein(key, library_[i]);
      return;
    }
    library_[i] = featurize::featurize_protein(record, options_);
  });
}

std::unique_ptr<ServiceCore> ServiceCore::open(const ServiceConfig& config) {
  Parts parts;
  parts.corpus = core::read_corpus(config.corpus_dir);
  for (const auto& path : config.checkpoints) parts.models.push_back(model::DtiModel::load(path));
  parts.adapter = chem::make_conformer_adapter(config.conformer);
  if (config.split_manifest) parts.manifest = balance::SplitManifest::read(*config.split_manifest);
  std::unique_ptr<featurize::FeatureCache> cache;
  if (config.feature_cache) {
    cache = std::make_unique<featurize::FeatureCache>(*config.feature_cache);
    parts.cache = cache.get();
  }
  parts.workers = config.workers;
  return std::make_unique<ServiceCore>(std::move(parts));
}

namespace {

chem::Molecule parse_query(const std::string& smiles) {
  if (trim(smiles).empty()) throw ClientError("smiles must be a non-empty string");
  try {
    return chem::parse_smiles(smiles);
  } catch (const chem::SmilesError& e) {
    const std::string what = e.what();
    throw ClientError(what.starts_with("invalid SMILES") ? what : "invalid SMILES: " + what);
  }
}

}  // namespace

std::vector<SearchHit> ServiceCore::similarity_search(const std::string& smiles) const {
  const auto mol = parse_query(smiles);
  const auto query = featurize::morgan_fingerprint(mol, options_.fingerprint_radius, options_.fingerprint_bits);
  std::vector<SearchHit> hits;
  for (std::size_t i = 0; i < compound_ids_.size(); ++i) {
    const double s = featurize::tanimoto(query, fingerprints_[i]);
    if (s > kSimilarityThreshold) {
      hits.push_back({compound_ids_[i], corpus_.compounds.at(compound_ids_[i]).smiles, s});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.compound_id < b.compound_id;
  });
  return hits;
}

std::vector<PredictionRow> ServiceCore::predict_targets(const std::string& smiles,
                                                        std::optional<std::size_t> top_k) const {
  parse_query(smiles);
  if (models_.empty()) throw InvalidArgument("prediction needs at least one checkpoint");
  if (top_k && *top_k == 0) throw ClientError("top_k must be positive");
  featurize::CompoundFeatures compound;
  try {
    compound = featurize::featurize_compound({"query", smiles, std::nullopt}, adapter_.get(), options_);
  } catch (const chem::ConformerError& e) {
    throw ConformerStageError(fmt::format("conformer generation ({}) failed: {}", adapter_ ? adapter_->name() : "none", e.what()));
  }
  std::vector<model::PairInput> pairs;
  pairs.reserve(library_.size());
  for (const auto& p : library_) pairs.push_back({&p, &compound});
  std::vector<PredictionRow> rows(library_.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].protein_id = protein_ids_[i];
    rows[i].family = std::string(core::family_name(corpus_.proteins.at(protein_ids_[i]).family));
  }
  for (const auto& m : models_) {
    const auto p = m->predict(pairs, 64, workers_);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].per_model_scores.push_back(p[i]);
  }
  for (auto& r : rows) {
    double sum = 0.0;
    for (double s : r.per_model_scores) sum += s;
    r.score = sum / static_cast<double>(r.per_model_scores.size());
  }
  rank_rows(rows);
  if (top_k && *top_k < rows.size()) rows.resize(*top_k);
  return rows;
}

std::string ServiceCore::export_dataset(const ExportFilter& filter) const {
  std::optional<core::ProteinFamily> family;
  if (filter.family) {
    family = core::parse_family(*filter.family);
    if (!family) {
      throw ClientError(fmt::format("unknown family '{}' (GPCR, Kinase, IonChannel, NuclearHormoneReceptor, Other)",
                                    *filter.family));
    }
  }
  std::optional<balance::Split> split_filter;
  if (filter.split) {
    try {
      split_filter = balance::parse_split(*filter.split);
    } catch (const InvalidArgument& e) {
      throw ClientError(e.what());
    }
    if (!manifest_) throw ClientError("split filter requested but no split manifest is loaded");
  }
  core::Corpus out;
  for (const auto& r : corpus_.interactions) {
    if (family && corpus_.proteins.at(r.protein_id).family != *family) continue;
    if (split_filter) {
      const auto it = manifest_->assignment.find(r.compound_id);
      if (it == manifest_->assignment.end() || it->second != *split_filter) continue;
    }
    out.interactions.push_back(r);
  }
  // Unfiltered exports keep the full registries; filtered ones keep the
  // entities their interactions reference.
  if (!family && !split_filter) {
    out.proteins = corpus_.proteins;
    out.compounds = corpus_.compounds;
  }
  for (const auto& r : out.interactions) {
    out.proteins[r.protein_id] = corpus_.proteins.at(r.protein_id);
    out.compounds[r.compound_id] = corpus_.compounds.at(r.compound_id);
  }
  // Server-local directories are not part of the dataset.
  for (auto& [id, p] : out.proteins) p.structure_path = std::filesystem::path(p.structure_path).filename().string();
  for (auto& [id, c] : out.compounds) {
    if (c.conformer_path) c.conformer_path = std::filesystem::path(*c.conformer_path).filename().string();
  }
  const auto stats = curation::corpus_stats(out);
  json by_family = json::object();
  for (const auto& [f, n] : stats.targets_by_family) by_family[std::string(core::family_name(f))] = n;
  const json manifest = {
      {"format_version", kExportFormatVersion},
      {"source_corpus_hash", corpus_hash_},
      {"filter", {{"family", filter.family ? json(*filter.family) : json()}, {"split", filter.split ? json(*filter.split) : json()}}},
      {"stats",
       {{"n_compounds", stats.n_compounds},
        {"n_targets", stats.n_targets},
        {"n_interactions", stats.n_interactions},
        {"n_positive", stats.n_positive},
        {"n_negative", stats.n_negative},
        {"targets_by_family", by_family}}},
      {"files", {core::kInteractionsFile, core::kProteinsFile, core::kCompoundsFile}}};
  const std::string tar = make_tar({{"scope/manifest.json", manifest.dump(2) + "\n"},
                                    {std::string("scope/") + core::kInteractionsFile, core::format_interactions(out.interactions)},
                                    {std::string("scope/") + core::kProteinsFile, core::format_proteins(out.proteins)},
                                    {std::string("scope/") + core::kCompoundsFile, core::format_compounds(out.compounds)}});
  return gzip_compress(tar);
}

json ServiceCore::search_payload(const std::string& smiles) const {
  json hits = json::array();
  for (const auto& h : similarity_search(smiles)) hits.push_back(h.to_json());
  return {{"api_version", kApiVersion},
          {"query", smiles},
          {"threshold", kSimilarityThreshold},
          {"n_hits", hits.size()},
          {"hits", hits}};
}

json ServiceCore::predict_payload(const std::string& smiles, std::optional<std::size_t> top_k) const {
  json rows = json::array();
  for (const auto& r : predict_targets(smiles, top_k)) rows.push_back(r.to_json());
  return {{"api_version", kApiVersion},
          {"query", smiles},
          {"n_models", models_.size()},
          {"top_k", top_k ? json(*top_k) : json()},
          {"rows", rows}};
}

json ServiceCore::health_payload() const {
  return {{"status", "ok"},
          {"api_version", kApiVersion},
          {"version", kServiceVersion},
          {"corpus_hash", corpus_hash_},
          {"n_proteins", corpus_.proteins.size()},
          {"n_compounds", corpus_.compounds.size()},
          {"n_interactions", corpus_.interactions.size()},
          {"n_models", models_.size()}};
}

std::string render(const json& payload) { return payload.dump(2) + "\n"; }

}  // namespace scope::service
