// Copyright 2026 The relemb Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// relemb: command-line driver for the relational embedding pipeline.
//
// Every subcommand starts from the defaults, then the --config file, then
// RELEMB_* environment variables, then its own flags.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric divergence.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relemb/embedding.h"
#include "relemb/error.h"
#include "relemb/pipeline.h"
#include "relemb/synthetic.h"

namespace fs = std::filesystem;

namespace {

void log_stderr(const std::string& line) { std::cerr << line << '\n'; }

// Flags shared by several subcommands, applied on top of the config.
struct Overrides {
  std::vector<std::pair<std::string, std::string>> kv;

  void add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { kv.emplace_back(key, v); }, help);
  }

  void apply(relemb::PipelineConfig& cfg) const {
    for (const auto& [k, v] : kv) cfg.set(k, v);
  }
};

relemb::PipelineConfig base_config(const std::string& config_path) {
  if (!config_path.empty()) return relemb::PipelineConfig::load(config_path);
  relemb::PipelineConfig cfg;
  cfg.apply_env();
  return cfg;
}

fs::path or_default(const std::string& flag, const fs::path& fallback) {
  return flag.empty() ? fallback : fs::path(flag);
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::string item;
  for (size_t i = 0; i <= csv.size(); ++i) {
    if (i == csv.size() || csv[i] == ',') {
      if (!item.empty()) out.push_back(std::stod(item));
      item.clear();
    } else {
      item += csv[i];
    }
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Relational word embeddings from lexical patterns"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");

  Overrides ov;
  std::string in_a, in_b, in_c, out;

  auto* extract = app.add_subcommand("extract", "count word pairs and patterns");
  extract->add_option("--corpus", in_a, "plain-text corpus");
  ov.add(extract, "--window", "window", "co-occurrence window in tokens");
  ov.add(extract, "--min-sentences", "min_sentences",
              "minimum sentence count per word pair");
  ov.add(extract, "--top-patterns", "top_patterns", "patterns to keep (K)");
  extract->add_option("--stopwords", in_b, "stop-word list, one per line");
  ov.add(extract, "--threads", "threads", "worker threads");
  extract->add_option("--out", out, "output directory");

  auto* ppmi = app.add_subcommand("ppmi", "build the PPMI association store");
  ppmi->add_option("--counts", in_a, "counts.bin from extract");
  ppmi->add_option("--out", out, "output directory");

  auto* mine = app.add_subcommand("mine-pairs", "select training pattern pairs");
  mine->add_option("--store", in_a, "store.bin from ppmi");
  ov.add(mine, "--pos", "pos", "positive instances");
  ov.add(mine, "--neg", "neg", "negative instances");
  ov.add(mine, "--seed", "seed", "random seed");
  bool decile = false;
  mine->add_flag("--neg-sample-window", decile,
                 "sample negatives from the lowest decile instead of the bottom");
  mine->add_option("--out", out, "output train-set TSV");

  auto* init = app.add_subcommand("init", "initialise word embeddings");
  init->add_option("--vocab", in_a, "vocab.txt from extract");
  ov.add(init, "--dim", "dim", "embedding dimension");
  init->add_option("--pretrained", in_b, "GloVe or word2vec text vectors");
  ov.add(init, "--seed", "seed", "random seed");
  init->add_option("--out", out, "output embedding file");

  auto* trn = app.add_subcommand("train", "train word embeddings");
  trn->add_option("--store", in_a, "store.bin from ppmi");
  trn->add_option("--pairs", in_b, "train-set TSV from mine-pairs");
  trn->add_option("--init", in_c, "initial embeddings");
  std::optional<size_t> train_dim;
  trn->add_option("--dim", train_dim, "expected embedding dimension");
  ov.add(trn, "--epochs", "epochs", "training epochs");
  ov.add(trn, "--lr", "lr", "AdaGrad initial learning rate");
  ov.add(trn, "--mode", "mode", "naive | optimized");
  ov.add(trn, "--refresh", "refresh", "epoch | lazy");
  ov.add(trn, "--seed", "seed", "shuffle seed");
  trn->add_option("--out", out, "output embedding file");
  std::string metrics_path;
  trn->add_option("--metrics", metrics_path, "per-epoch JSON lines");

  auto* eval = app.add_subcommand("eval", "evaluate on analogy datasets");
  eval->add_option("--embeddings", in_a, "embedding file");
  std::vector<std::string> eval_datasets, eval_formats, eval_measures;
  eval->add_option("--dataset", eval_datasets, "dataset file (repeatable)");
  eval->add_option("--format", eval_formats, "google | choice-tsv (per dataset)");
  eval->add_option("--measure", eval_measures, "cosadd | cosmult | pairdiff");
  ov.add(eval, "--epsilon", "epsilon", "CosMult epsilon");
  eval->add_option("--report", out, "output eval.jsonl");

  auto* runc = app.add_subcommand("run", "run stages from the config");
  std::vector<std::string> stages;
  runc->add_option("stages", stages, "stage names or 'all'")->required();

  auto* report = app.add_subcommand("report", "summarise evaluation results");
  std::string sweep_dim, sweep_pairs;
  report->add_option("--sweep-dim", sweep_dim, "comma-separated dimensions");
  report->add_option("--sweep-pairs", sweep_pairs,
                     "comma-separated per-class train-pair counts");

  auto* verify = app.add_subcommand("verify", "check artifact hashes in the manifest");

  auto* synth = app.add_subcommand("synth", "write a synthetic corpus with planted relations");
  relemb::SyntheticOptions so;
  synth->add_option("--relations", so.relations);
  synth->add_option("--pairs", so.pairs_per_relation);
  synth->add_option("--phrases", so.phrases_per_relation);
  synth->add_option("--sentences", so.sentences);
  synth->add_option("--noise", so.noise);
  synth->add_option("--seed", so.seed);
  synth->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  relemb::PipelineConfig cfg = base_config(config_path);
  ov.apply(cfg);
  const fs::path& dir = cfg.out_dir;

  if (*extract) {
    if (!in_a.empty()) cfg.corpus = in_a;
    if (!in_b.empty()) cfg.stopwords = in_b;
    if (cfg.corpus.empty()) throw relemb::UsageError("extract needs --corpus");
    relemb::extract_stage(cfg.corpus, cfg.stopwords, cfg.corpus_options(),
                          or_default(out, dir), log_stderr);
  } else if (*ppmi) {
    const fs::path o = or_default(out, dir);
    fs::create_directories(o);
    relemb::ppmi_stage(or_default(in_a, dir / "counts.bin"), o, log_stderr);
  } else if (*mine) {
    if (decile) cfg.negatives = relemb::NegativeSampling::kLowestDecile;
    relemb::mine_stage(or_default(in_a, dir / "store.bin"), cfg.mining_options(),
                       or_default(out, dir / "trainpairs.tsv"), log_stderr);
  } else if (*init) {
    if (!in_b.empty()) cfg.pretrained = in_b;
    relemb::init_stage(or_default(in_a, dir / "vocab.txt"),
                       cfg.pretrained.empty() ? cfg.dim : 0, cfg.pretrained,
                       cfg.seed, or_default(out, dir / "init.bin"), log_stderr);
  } else if (*trn) {
    const fs::path init_path = or_default(in_c, dir / "init.bin");
    if (train_dim) {
      const auto d = relemb::EmbeddingMatrix::load(init_path).dim();
      if (d != *train_dim) {
        throw relemb::UsageError("--dim " + std::to_string(*train_dim) +
                                 " does not match initial embeddings of dimension " +
                                 std::to_string(d));
      }
    }
    const fs::path o = or_default(out, dir / "embeddings.bin");
    fs::path metrics = metrics_path;
    if (metrics.empty()) metrics = o.parent_path() / "train_metrics.jsonl";
    relemb::train_stage(or_default(in_a, dir / "store.bin"),
                        or_default(in_b, dir / "trainpairs.tsv"), init_path,
                        cfg.train_options(), o, metrics, log_stderr);
  } else if (*eval) {
    std::vector<relemb::DatasetSpec> ds = cfg.datasets;
    if (!eval_datasets.empty()) {
      ds.clear();
      for (size_t i = 0; i < eval_datasets.size(); ++i) {
        std::string fmt = i < eval_formats.size()   ? eval_formats[i]
                          : !eval_formats.empty() ? eval_formats.back()
                          : fs::path(eval_datasets[i]).extension() == ".tsv"
                              ? "choice-tsv"
                              : "google";
        ds.push_back({eval_datasets[i], fmt});
      }
    }
    if (ds.empty()) throw relemb::UsageError("eval needs --dataset");
    std::vector<relemb::Measure> ms = cfg.measures;
    if (!eval_measures.empty()) {
      ms.clear();
      for (const auto& m : eval_measures) ms.push_back(relemb::parse_measure(m));
    }
    relemb::eval_stage(or_default(in_a, dir / "embeddings.bin"), ds, ms,
                       cfg.epsilon, or_default(out, dir / "eval.jsonl"),
                       [](const std::string& s) { std::cout << s; });
  } else if (*runc) {
    std::vector<relemb::Stage> todo;
    for (const auto& s : stages) {
      if (s == "all") {
        for (auto st : relemb::all_stages()) todo.push_back(st);
      } else {
        todo.push_back(relemb::parse_stage(s));
      }
    }
    for (auto st : todo) {
      log_stderr(std::string("== ") + relemb::stage_name(st));
      relemb::run_stage(cfg, st, log_stderr);
    }
  } else if (*report) {
    std::vector<std::pair<std::string, std::vector<relemb::SweepPoint>>> sweeps;
    if (!sweep_dim.empty()) {
      sweeps.emplace_back("dim",
                          relemb::run_sweep(cfg, "dim", parse_values(sweep_dim), log_stderr));
    }
    if (!sweep_pairs.empty()) {
      sweeps.emplace_back(
          "pairs", relemb::run_sweep(cfg, "pairs", parse_values(sweep_pairs), log_stderr));
    }
    relemb::write_report(cfg, sweeps, std::cout);
  } else if (*verify) {
    const auto problems = relemb::verify_manifest(dir);
    for (const auto& p : problems) std::cout << p << '\n';
    if (!problems.empty()) throw relemb::DataError("manifest check failed");
    std::cout << "manifest ok\n";
  } else if (*synth) {
    const auto corpus = relemb::generate_synthetic(so);
    fs::create_directories(out);
    relemb::write_synthetic(corpus, out);
    log_stderr("synth: " + std::to_string(corpus.token_count) + " tokens");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const relemb::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const relemb::DivergenceError& e) {
    std::cerr << "numeric divergence: " << e.what() << '\n';
    return 3;
  } catch (const relemb::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  }
}
