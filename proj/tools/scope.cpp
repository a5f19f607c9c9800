// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Every subcommand is a thin wrapper over the
// library; search/predict/export print exactly what the HTTP API returns.

#include <fmt/format.h>

#include <pthread.h>

#include <csignal>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "scope/balance/balance.hpp"
#include "scope/balance/split.hpp"
#include "scope/core/corpus_io.hpp"
#include "scope/core/validate.hpp"
#include "scope/curation/curation.hpp"
#include "scope/curation/pipeline.hpp"
#include "scope/interpret/interpret.hpp"
#include "scope/service/api.hpp"
#include "scope/service/service.hpp"
#include "scope/train/ablation.hpp"
#include "scope/train/run_config.hpp"
#include "scope/util/parallel.hpp"
#include "scope/util/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace scope;

namespace {

std::string history_jsonl(const std::vector<train::EpochRecord>& history) {
  std::string out;
  for (const auto& r : history) out += r.to_json().dump() + "\n";
  return out;
}

std::string report_tsv(const train::EvalReport& r) {
  TsvTable t;
  t.header = {"metric", "value"};
  const std::pair<const char*, double> rows[] = {{"auroc", r.auroc},       {"auprc", r.auprc},
                                                 {"f1", r.f1},             {"accuracy", r.accuracy},
                                                 {"sensitivity", r.sensitivity}, {"specificity", r.specificity},
                                                 {"threshold", r.threshold}};
  for (const auto& [k, v] : rows) t.rows.push_back({k, format_double(v)});
  t.rows.push_back({"n_pairs", std::to_string(r.n_pairs)});
  t.rows.push_back({"seed", std::to_string(r.seed)});
  return format_tsv(t);
}

std::string report_summary(const train::EvalReport& r) {
  return fmt::format("AUROC {:.3f}  AUPRC {:.3f}  F1 {:.3f}  acc {:.3f}  sens {:.3f}  spec {:.3f}  ({} pairs, seed {})\n",
                     r.auroc, r.auprc, r.f1, r.accuracy, r.sensitivity, r.specificity, r.n_pairs, r.seed);
}

// Search/predict/export either from a service config file or from direct
// flags; both build the same ServiceCore.
struct ServiceFlags {
  std::string config;
  std::string corpus;
  std::vector<std::string> checkpoints;
  std::string manifest;
  std::string conformer = "coarse";
  unsigned workers = 1;

  void add(CLI::App* app, bool with_checkpoints) {
    app->add_option("--config", config, "service config (INI)");
    app->add_option("--corpus", corpus, "corpus directory");
    if (with_checkpoints) {
      app->add_option("--checkpoint", checkpoints, "checkpoint file (repeat for an ensemble)");
      app->add_option("--conformer", conformer, "conformer adapter: coarse | external:<cmd>");
    }
    app->add_option("--workers", workers, "worker threads");
  }

  service::ServiceConfig resolve() const {
    service::ServiceConfig c;
    if (!config.empty()) c = service::ServiceConfig::load(config);
    if (!corpus.empty()) c.corpus_dir = corpus;
    if (!checkpoints.empty()) c.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    if (!manifest.empty()) c.split_manifest = manifest;
    if (conformer != "coarse" || config.empty()) c.conformer = conformer;
    if (workers > 1 || config.empty()) c.workers = workers;
    if (c.corpus_dir.empty()) throw InvalidArgument("either --config or --corpus is required");
    return c;
  }
};

int print_response(const service::HttpResponse& r) {
  if (r.status == 200) {
    std::cout << r.body;
    return 0;
  }
  std::cout << r.body;
  return r.status >= 500 ? 1 : 2;
}

train::RunConfig run_config_from(const std::string& path, const std::string& corpus, const std::string& split) {
  if (!path.empty()) {
    auto c = train::RunConfig::load(path);
    if (!corpus.empty()) c.corpus_dir = corpus;
    if (!split.empty()) c.split_manifest = split;
    return c;
  }
  if (corpus.empty() || split.empty()) throw InvalidArgument("either --config or both --corpus and --split are required");
  return train::RunConfig::from_json({{"corpus", corpus}, {"split", split}});
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    const auto v = parse_double(trim(part));
    if (!v) throw InvalidArgument(fmt::format("not a number: '{}'", part));
    out.push_back(*v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scope: drug-target interaction corpus, model and service tools"};
  app.require_subcommand(1);
  app.set_version_flag("--version", service::kServiceVersion);
  int exit_code = 0;

  // curate
  auto* curate = app.add_subcommand("curate", "ingest sources, label, canonicalise and merge into a corpus");
  std::string sources_dir, rules_file, out_dir;
  curate->add_option("--sources", sources_dir, "sources directory")->required();
  curate->add_option("--rules", rules_file, "label rules (INI); built-in defaults when omitted");
  curate->add_option("--out", out_dir, "output corpus directory")->required();
  curate->callback([&] {
    const auto rules = rules_file.empty() ? curation::default_label_rules() : curation::read_label_rules(rules_file);
    const auto run = curation::run_curation(sources_dir, rules);
    core::write_corpus(run.corpus, out_dir);
    write_file(fs::path(out_dir) / "curation_summary.tsv", run.summary_tsv());
    std::cout << run.summary_tsv();
  });

  // validate
  auto* validate = app.add_subcommand("validate", "report schema and referential issues in a corpus");
  std::string corpus_dir;
  validate->add_option("--corpus", corpus_dir, "corpus directory")->required();
  validate->callback([&] {
    const auto report = core::validate_corpus(core::read_corpus(corpus_dir));
    for (const auto& i : report.issues) {
      std::cout << fmt::format("{}\t{}\t{}\n", core::issue_kind_name(i.kind), i.subject, i.detail);
    }
    std::cerr << fmt::format("{} issue(s)\n", report.issues.size());
    exit_code = report.ok() ? 0 : 1;
  });

  // stats
  auto* stats = app.add_subcommand("stats", "corpus statistics");
  stats->add_option("--corpus", corpus_dir, "corpus directory")->required();
  stats->callback([&] { std::cout << curation::corpus_stats(core::read_corpus(corpus_dir)).to_tsv(); });

  // balance
  auto* balance_cmd = app.add_subcommand("balance", "target-level class imbalance filter");
  balance::BalanceOptions bopt;
  std::string report_path;
  balance_cmd->add_option("--corpus", corpus_dir, "input corpus directory")->required();
  balance_cmd->add_option("--out", out_dir, "output corpus directory")->required();
  balance_cmd->add_option("--seed", bopt.seed, "subsampling seed");
  balance_cmd->add_option("--min-interactions", bopt.min_interactions, "drop proteins left with fewer records");
  balance_cmd->add_option("--majority-cap", bopt.majority_cap, "maximum majority-class share");
  balance_cmd->add_option("--report", report_path, "filter report TSV (default <out>/filter_report.tsv)");
  balance_cmd->callback([&] {
    const auto result = balance::balance_filter(core::read_corpus(corpus_dir), bopt);
    core::write_corpus(result.corpus, out_dir);
    write_file(report_path.empty() ? fs::path(out_dir) / "filter_report.tsv" : fs::path(report_path),
               result.report.to_tsv());
    std::cerr << fmt::format("removed {} interactions, dropped {} proteins\n", result.report.removed_interactions,
                             result.report.dropped_proteins);
  });

  // histogram
  auto* histogram = app.add_subcommand("histogram", "proteins per positive-ratio bin");
  double bin_width = 0.02;
  histogram->add_option("--corpus", corpus_dir, "corpus directory")->required();
  histogram->add_option("--bin-width", bin_width, "bin width in (0, 1]");
  histogram->callback([&] { std::cout << balance::ratio_histogram(core::read_corpus(corpus_dir), bin_width).to_tsv(); });

  // split
  auto* split_cmd = app.add_subcommand("split", "semi-inductive compound split");
  std::uint64_t split_seed = 0;
  std::string ratio_text = "0.7,0.1,0.2";
  std::string manifest_out;
  split_cmd->add_option("--corpus", corpus_dir, "corpus directory")->required();
  split_cmd->add_option("--seed", split_seed, "shuffle seed")->required();
  split_cmd->add_option("--ratio", ratio_text, "train,val,test fractions");
  split_cmd->add_option("--out", manifest_out, "manifest TSV")->required();
  split_cmd->callback([&] {
    const auto r = parse_list(ratio_text);
    if (r.size() != 3) throw InvalidArgument("--ratio needs three values");
    const auto m = balance::semi_inductive_split(core::read_corpus(corpus_dir), split_seed, {r[0], r[1], r[2]});
    m.write(manifest_out);
    const auto c = m.counts();
    std::cerr << fmt::format("train {} / val {} / test {} compounds ({} moved for containment)\n", c[0], c[1], c[2],
                             m.repaired_compounds);
  });

  // train
  auto* train_cmd = app.add_subcommand("train", "train one model and evaluate it on the test split");
  std::string run_path, split_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<int> epochs_override;
  unsigned workers = 1;
  train_cmd->add_option("--config", run_path, "run config (JSON)");
  train_cmd->add_option("--corpus", corpus_dir, "corpus directory (overrides config)");
  train_cmd->add_option("--split", split_path, "split manifest (overrides config)");
  train_cmd->add_option("--out", out_dir, "output directory (overrides config)");
  train_cmd->add_option("--seed", seed_override, "training seed (overrides config)");
  train_cmd->add_option("--epochs", epochs_override, "maximum epochs (overrides config)");
  train_cmd->add_option("--workers", workers, "featurization and evaluation threads");
  train_cmd->callback([&] {
    auto cfg = run_config_from(run_path, corpus_dir, split_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed_override) cfg.train.seed = *seed_override;
    if (epochs_override) cfg.train.max_epochs = *epochs_override;
    cfg.train.workers = workers;
    const auto data = train::prepare_data(cfg, workers);
    train::TrainHooks hooks;
    hooks.forbidden_compounds = data.manifest.compounds_in(balance::Split::kTest);
    hooks.on_epoch = [](const train::EpochRecord& r) {
      std::cerr << fmt::format("epoch {:3d}  loss {:.5f}  val_auroc {:.4f}\n", r.epoch, r.loss, r.val_auroc);
    };
    const auto result = train::train(data.train, data.val, cfg.train, hooks);
    fs::create_directories(cfg.out_dir);
    const json meta = {{"seed", cfg.train.seed},
                       {"best_epoch", result.best_epoch},
                       {"train_config", cfg.train.to_json()},
                       {"corpus_hash", core::corpus_hash(data.corpus)}};
    result.model->save(cfg.out_dir / "model.ckpt", meta);
    write_file(cfg.out_dir / "history.jsonl", history_jsonl(result.history));
    const auto report = train::evaluate(*result.model, data.test, cfg.train.seed, workers);
    write_file(cfg.out_dir / "test_report.tsv", report_tsv(report));
    std::cout << fmt::format("selected epoch {}\n", result.best_epoch) << report_summary(report);
  });

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on one split");
  std::string checkpoint_path, split_name = "test";
  bool as_json = false;
  eval_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
  eval_cmd->add_option("--config", run_path, "run config (JSON)");
  eval_cmd->add_option("--corpus", corpus_dir, "corpus directory (overrides config)");
  eval_cmd->add_option("--manifest", split_path, "split manifest (overrides config)");
  eval_cmd->add_option("--split", split_name, "train | val | test");
  eval_cmd->add_option("--workers", workers, "evaluation threads");
  eval_cmd->add_flag("--json", as_json, "print the report as JSON");
  eval_cmd->callback([&] {
    const auto cfg = run_config_from(run_path, corpus_dir, split_path);
    json meta;
    const auto model = model::DtiModel::load(checkpoint_path, &meta);
    const auto data = train::prepare_data(cfg, workers);
    const auto report =
        train::evaluate(*model, data.pairs(balance::parse_split(split_name)), meta.value("seed", 0ULL), workers);
    std::cout << (as_json ? report.to_json().dump(2) + "\n" : report_tsv(report));
    std::cerr << report_summary(report);
  });

  // ablation
  auto* ablation_cmd = app.add_subcommand("ablation", "the seven-row encoder/backbone ablation grid");
  std::optional<int> runs_override;
  ablation_cmd->add_option("--config", run_path, "run config (JSON)");
  ablation_cmd->add_option("--corpus", corpus_dir, "corpus directory (overrides config)");
  ablation_cmd->add_option("--split", split_path, "split manifest (overrides config)");
  ablation_cmd->add_option("--out", out_dir, "output directory (overrides config)");
  ablation_cmd->add_option("--runs", runs_override, "seeds per variant (overrides config)");
  ablation_cmd->add_option("--workers", workers, "featurization and evaluation threads");
  ablation_cmd->callback([&] {
    auto cfg = run_config_from(run_path, corpus_dir, split_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (runs_override) cfg.runs = *runs_override;
    cfg.train.workers = workers;
    const auto data = train::prepare_data(cfg, workers);
    const auto rows = train::ablation_grid(data.train, data.val, data.test, cfg.train, cfg.runs,
                                           [](const train::AblationRow& r) {
                                             std::cerr << fmt::format("{}: AUROC {}\n", r.variant.header(),
                                                                      r.result.auroc.str());
                                           });
    fs::create_directories(cfg.out_dir);
    write_file(cfg.out_dir / "ablation.tsv", train::ablation_tsv(rows));
    json all = json::array();
    for (const auto& r : rows) all.push_back({{"variant", r.variant.header()}, {"result", r.result.to_json()}});
    write_file(cfg.out_dir / "ablation.json", all.dump(2) + "\n");
    std::cout << train::ablation_table(rows);
  });

  // search
  auto* search_cmd = app.add_subcommand("search", "corpus compounds with Tanimoto similarity > 0.9");
  ServiceFlags search_flags;
  std::string smiles;
  search_flags.add(search_cmd, false);
  search_cmd->add_option("--smiles", smiles, "query SMILES")->required();
  search_cmd->callback([&] {
    const auto core = service::ServiceCore::open(search_flags.resolve());
    exit_code = print_response(
        service::guarded([&] { return service::json_response(200, core->search_payload(smiles)); }, "search"));
  });

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "rank every library protein for a compound");
  ServiceFlags predict_flags;
  std::optional<std::size_t> top_k;
  predict_flags.add(predict_cmd, true);
  predict_cmd->add_option("--smiles", smiles, "query SMILES")->required();
  predict_cmd->add_option("--top-k", top_k, "keep the k best-ranked proteins");
  predict_cmd->callback([&] {
    const auto core = service::ServiceCore::open(predict_flags.resolve());
    exit_code = print_response(service::guarded(
        [&] {
          if (top_k && *top_k == 0) throw service::ClientError("field 'top_k' must be a positive integer");
          return service::json_response(200, core->predict_payload(smiles, top_k));
        },
        "predict"));
  });

  // export
  auto* export_cmd = app.add_subcommand("export", "write the dataset archive (tar.gz)");
  ServiceFlags export_flags;
  std::string family, split_filter, archive_out;
  export_flags.add(export_cmd, false);
  export_cmd->add_option("--manifest", export_flags.manifest, "split manifest, needed for --split");
  export_cmd->add_option("--family", family, "keep one target family");
  export_cmd->add_option("--split", split_filter, "keep one split (train | val | test)");
  export_cmd->add_option("--out", archive_out, "archive path")->required();
  export_cmd->callback([&] {
    const auto core = service::ServiceCore::open(export_flags.resolve());
    service::ExportFilter filter;
    if (!family.empty()) filter.family = family;
    if (!split_filter.empty()) filter.split = split_filter;
    service::HttpResponse r = service::guarded(
        [&] { return service::HttpResponse{200, "application/gzip", core->export_dataset(filter), {}}; }, "export");
    if (r.status == 200) {
      write_file(archive_out, r.body);
    } else {
      exit_code = print_response(r);
    }
  });

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "HTTP API over a corpus and checkpoints");
  ServiceFlags serve_flags;
  std::optional<int> port;
  serve_flags.add(serve_cmd, true);
  serve_cmd->add_option("--manifest", serve_flags.manifest, "split manifest for dataset split filters");
  serve_cmd->add_option("--port", port, "listen port (0 picks a free one)");
  serve_cmd->callback([&] {
    auto cfg = serve_flags.resolve();
    if (port) cfg.port = *port;
    const auto core = service::ServiceCore::open(cfg);
    // Block SIGINT/SIGTERM before the server threads start so they inherit
    // the mask; the main thread then waits for either and shuts down.
    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGINT);
    sigaddset(&stop_signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);
    service::ApiServer server(*core, cfg);
    const int bound = server.start();
    std::cout << fmt::format("listening on http://{}:{}/api/v1 (corpus {})\n", cfg.host, bound, core->corpus_hash())
              << std::flush;
    int received = 0;
    sigwait(&stop_signals, &received);
    std::cerr << "shutting down\n";
    server.stop();
  });

  // interpret
  auto* interpret_cmd = app.add_subcommand("interpret", "attention clustering and accuracy-vs-count analysis");
  interpret::UmapParams umap;
  interpret::OpticsParams optics;
  std::string embedding = "residue", bins_text = "0,5,10,20,50,100,200";
  std::size_t min_pairs = 0;
  interpret_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint file (BAN backbone)")->required();
  interpret_cmd->add_option("--config", run_path, "run config (JSON)");
  interpret_cmd->add_option("--corpus", corpus_dir, "corpus directory (overrides config)");
  interpret_cmd->add_option("--manifest", split_path, "split manifest (overrides config)");
  interpret_cmd->add_option("--split", split_name, "split whose pairs are analysed");
  interpret_cmd->add_option("--out", out_dir, "output directory")->required();
  interpret_cmd->add_option("--embedding", embedding, "residue | joint | pooled");
  interpret_cmd->add_option("--neighbors", umap.n_neighbors, "UMAP neighbours");
  interpret_cmd->add_option("--min-dist", umap.min_dist, "UMAP min_dist");
  interpret_cmd->add_option("--umap-seed", umap.seed, "UMAP seed");
  interpret_cmd->add_option("--min-samples", optics.min_samples, "OPTICS min_samples");
  interpret_cmd->add_option("--xi", optics.xi, "OPTICS xi");
  interpret_cmd->add_option("--min-cluster-size", optics.min_cluster_size, "fraction (<1) or count");
  interpret_cmd->add_option("--bins", bins_text, "bin edges for known-interaction counts");
  interpret_cmd->add_option("--min-pairs", min_pairs, "only cluster proteins with at least this many pairs");
  interpret_cmd->add_option("--workers", workers, "threads (one protein per task)");
  interpret_cmd->callback([&] {
    const auto cfg = run_config_from(run_path, corpus_dir, split_path);
    const auto model = model::DtiModel::load(checkpoint_path);
    const auto data = train::prepare_data(cfg, workers);
    const auto& pairs = data.pairs(balance::parse_split(split_name));
    const auto vectors = interpret::extract_attention(*model, pairs, interpret::parse_embedding(embedding), workers);

    std::map<std::string, std::vector<std::size_t>> by_protein;
    for (std::size_t i = 0; i < vectors.size(); ++i) by_protein[vectors[i].protein_id].push_back(i);
    std::vector<std::string> proteins;
    for (const auto& [id, idx] : by_protein) {
      if (idx.size() >= min_pairs) proteins.push_back(id);
    }
    const fs::path out(out_dir);
    fs::create_directories(out / "clusters");
    std::vector<std::string> warnings(proteins.size());
    std::vector<int> n_clusters(proteins.size());
    parallel_for(proteins.size(), workers, [&](std::size_t k) {
      const auto& idx = by_protein.at(proteins[k]);
      std::vector<RowVector> vs;
      std::vector<interpret::AttentionVector> subset;
      for (std::size_t i : idx) {
        vs.push_back(vectors[i].vector);
        subset.push_back(vectors[i]);
      }
      const auto a = interpret::cluster_protein(vs, umap, optics);
      interpret::write_cluster_tsv(out / "clusters" / (proteins[k] + ".tsv"), subset, a);
      interpret::write_cluster_svg(out / "clusters" / (proteins[k] + ".svg"), proteins[k], a);
      warnings[k] = a.warning;
      n_clusters[k] = a.n_clusters;
    });
    for (std::size_t k = 0; k < proteins.size(); ++k) {
      if (!warnings[k].empty()) std::cerr << fmt::format("warning: {}: {}\n", proteins[k], warnings[k]);
    }

    std::vector<double> scores;
    for (const auto& v : vectors) scores.push_back(v.predicted_p);
    const auto report = train::compute_metrics(scores, pairs.labels);
    std::map<std::string, int> n_known;
    for (const auto& id : data.train.protein_ids) ++n_known[id];
    const auto curve = interpret::accuracy_vs_count(pairs.protein_ids, scores, pairs.labels, n_known,
                                                    report.threshold, parse_list(bins_text));
    interpret::write_curve_tsv(out / "accuracy_vs_count.tsv", curve);
    interpret::write_curve_svg(out / "accuracy_vs_count.svg", curve);
    json summary = {{"split", split_name},
                    {"embedding", embedding},
                    {"threshold", report.to_json().at("threshold")},
                    {"proteins", json::object()}};
    for (std::size_t k = 0; k < proteins.size(); ++k) summary["proteins"][proteins[k]] = n_clusters[k];
    write_file(out / "summary.json", summary.dump(2) + "\n");
    std::cout << fmt::format("{} proteins clustered, curve over {} proteins written to {}\n", proteins.size(),
                             curve.points.size(), out.string());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
