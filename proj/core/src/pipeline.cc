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

#include "relemb/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "relemb/association.h"
#include "relemb/embedding.h"
#include "relemb/error.h"
#include "relemb/io.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace relemb {
namespace {

const char* const kConfigKeys[] = {
    "corpus", "stopwords",  "out_dir", "window",   "min_sentences",
    "top_patterns", "pos",  "neg",     "neg_sampling", "dim",
    "epochs", "lr",         "mode",    "refresh",  "seed",
    "pretrained", "datasets", "measures", "epsilon", "threads"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Malformed values in a config are usage errors, not data errors.
int64_t to_int(std::string_view key, std::string_view v) {
  try {
    return io::parse_int(trim(v), "config key " + std::string(key));
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
}

double to_double(std::string_view key, std::string_view v) {
  try {
    return io::parse_double(trim(v), "config key " + std::string(key));
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
}

uint64_t to_uint(std::string_view key, std::string_view v) {
  const auto n = to_int(key, v);
  if (n < 0) throw UsageError("config key " + std::string(key) + " must be >= 0");
  return static_cast<uint64_t>(n);
}

fs::path resolve(std::string_view value, const fs::path& base) {
  fs::path p{trim(value)};
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

std::string infer_format(const fs::path& p) {
  return p.extension() == ".tsv" ? "choice-tsv" : "google";
}

void log_line(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

// Artifact file names inside out_dir.
constexpr const char* kCounts = "counts.bin";
constexpr const char* kPairsTsv = "pairs.tsv";
constexpr const char* kPatternsTsv = "patterns.tsv";
constexpr const char* kVocab = "vocab.txt";
constexpr const char* kStore = "store.bin";
constexpr const char* kStoreTsv = "store.tsv";
constexpr const char* kTrainPairs = "trainpairs.tsv";
constexpr const char* kInit = "init.bin";
constexpr const char* kEmbeddings = "embeddings.bin";
constexpr const char* kEmbeddingsTxt = "embeddings.txt";
constexpr const char* kMetrics = "train_metrics.jsonl";
constexpr const char* kEval = "eval.jsonl";
constexpr const char* kEvalTxt = "eval.txt";
constexpr const char* kManifest = "manifest.json";

struct StageFiles {
  std::vector<std::pair<std::string, Stage>> inputs;  // artifact, producer
  std::vector<std::string> outputs;
};

StageFiles stage_files(Stage s) {
  switch (s) {
    case Stage::kExtract:
      return {{}, {kCounts, kPairsTsv, kPatternsTsv, kVocab}};
    case Stage::kPpmi:
      return {{{kCounts, Stage::kExtract}}, {kStore, kStoreTsv}};
    case Stage::kMinePairs:
      return {{{kStore, Stage::kPpmi}}, {kTrainPairs}};
    case Stage::kInit:
      return {{{kVocab, Stage::kExtract}}, {kInit}};
    case Stage::kTrain:
      return {{{kStore, Stage::kPpmi},
               {kTrainPairs, Stage::kMinePairs},
               {kInit, Stage::kInit}},
              {kEmbeddings, kEmbeddingsTxt}};
    case Stage::kEval:
      return {{{kEmbeddings, Stage::kTrain}}, {kEval, kEvalTxt}};
  }
  return {};
}

json read_manifest(const fs::path& out_dir) {
  const auto path = out_dir / kManifest;
  if (!fs::exists(path)) return json{{"stages", json::object()}};
  std::ifstream in(path);
  try {
    json j = json::parse(in);
    if (!j.contains("stages")) j["stages"] = json::object();
    return j;
  } catch (const json::exception& e) {
    throw DataError("corrupt manifest " + path.string() + ": " + e.what());
  }
}

void write_metrics_line(std::ostream& out, const EpochMetrics& m) {
  json j = {{"epoch", m.epoch},
            {"mean_loss", m.mean_loss},
            {"accuracy", m.accuracy},
            {"seconds", m.seconds},
            {"instances", m.instances},
            {"pattern_refreshes", m.pattern_refreshes},
            {"word_updates", m.word_updates}};
  out << j.dump() << '\n';
}

}  // namespace

void PipelineConfig::set(std::string_view key_in, std::string_view value_in,
                         const fs::path& base) {
  const std::string key = trim(key_in);
  const std::string value = trim(value_in);
  auto bad = [&](const char* expected) {
    return UsageError("config key '" + key + "': expected " + expected +
                      ", got '" + value + "'");
  };
  if (key == "corpus") {
    corpus = resolve(value, base);
  } else if (key == "stopwords") {
    stopwords = resolve(value, base);
  } else if (key == "out_dir") {
    out_dir = resolve(value, base);
  } else if (key == "window") {
    window = static_cast<int>(to_uint(key, value));
  } else if (key == "min_sentences") {
    min_sentences = to_uint(key, value);
  } else if (key == "top_patterns") {
    top_patterns = to_uint(key, value);
  } else if (key == "pos") {
    n_pos = to_uint(key, value);
  } else if (key == "neg") {
    n_neg = to_uint(key, value);
  } else if (key == "neg_sampling") {
    if (value == "bottom") {
      negatives = NegativeSampling::kBottom;
    } else if (value == "decile") {
      negatives = NegativeSampling::kLowestDecile;
    } else {
      throw bad("bottom|decile");
    }
  } else if (key == "dim") {
    dim = to_uint(key, value);
  } else if (key == "epochs") {
    epochs = to_uint(key, value);
  } else if (key == "lr") {
    learning_rate = to_double("lr", value);
  } else if (key == "mode") {
    if (value == "naive") {
      mode = TrainMode::kNaive;
    } else if (value == "optimized") {
      mode = TrainMode::kOptimized;
    } else {
      throw bad("naive|optimized");
    }
  } else if (key == "refresh") {
    if (value == "epoch") {
      refresh = PatternRefresh::kEpoch;
    } else if (value == "lazy") {
      refresh = PatternRefresh::kLazy;
    } else {
      throw bad("epoch|lazy");
    }
  } else if (key == "seed") {
    seed = to_uint(key, value);
  } else if (key == "pretrained") {
    pretrained = resolve(value, base);
  } else if (key == "datasets") {
    datasets.clear();
    for (auto item : io::split(value, ';')) {
      const std::string entry = trim(item);
      if (entry.empty()) continue;
      DatasetSpec spec;
      const auto colon = entry.rfind(':');
      if (colon != std::string::npos &&
          (entry.substr(colon + 1) == "google" ||
           entry.substr(colon + 1) == "choice-tsv")) {
        spec.path = resolve(entry.substr(0, colon), base);
        spec.format = entry.substr(colon + 1);
      } else {
        spec.path = resolve(entry, base);
        spec.format = infer_format(spec.path);
      }
      datasets.push_back(std::move(spec));
    }
  } else if (key == "measures") {
    measures.clear();
    for (auto item : io::split(value, ',')) {
      const std::string m = trim(item);
      if (!m.empty()) measures.push_back(parse_measure(m));
    }
  } else if (key == "epsilon") {
    epsilon = to_double("epsilon", value);
  } else if (key == "threads") {
    threads = static_cast<unsigned>(std::max<uint64_t>(1, to_uint(key, value)));
  } else {
    throw UsageError("unknown config key '" + key + "'");
  }
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path.string());
  PipelineConfig cfg;
  const fs::path base = path.parent_path();
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(lineno) +
                       ": expected key = value");
    }
    cfg.set(line.substr(0, eq), line.substr(eq + 1), base);
  }
  cfg.apply_env();
  return cfg;
}

void PipelineConfig::apply_env() {
  for (const char* key : kConfigKeys) {
    std::string name = "RELEMB_";
    for (const char* c = key; *c; ++c) {
      name += static_cast<char>(std::toupper(static_cast<unsigned char>(*c)));
    }
    if (const char* v = std::getenv(name.c_str())) set(key, v);
  }
}

std::string PipelineConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["corpus"] = corpus.string();
  kv["stopwords"] = stopwords.string();
  kv["out_dir"] = out_dir.string();
  kv["window"] = std::to_string(window);
  kv["min_sentences"] = std::to_string(min_sentences);
  kv["top_patterns"] = std::to_string(top_patterns);
  kv["pos"] = std::to_string(n_pos);
  kv["neg"] = std::to_string(n_neg);
  kv["neg_sampling"] =
      negatives == NegativeSampling::kBottom ? "bottom" : "decile";
  kv["dim"] = std::to_string(dim);
  kv["epochs"] = std::to_string(epochs);
  kv["lr"] = io::format_double(learning_rate);
  kv["mode"] = mode == TrainMode::kNaive ? "naive" : "optimized";
  kv["refresh"] = refresh == PatternRefresh::kEpoch ? "epoch" : "lazy";
  kv["seed"] = std::to_string(seed);
  kv["pretrained"] = pretrained.string();
  std::string ds;
  for (const auto& d : datasets) {
    if (!ds.empty()) ds += ';';
    ds += d.path.string() + ":" + d.format;
  }
  kv["datasets"] = ds;
  std::string ms;
  for (auto m : measures) {
    if (!ms.empty()) ms += ',';
    ms += measure_name(m);
  }
  kv["measures"] = ms;
  kv["epsilon"] = io::format_double(epsilon);
  kv["threads"] = std::to_string(threads);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string PipelineConfig::hash() const { return io::sha256_hex(canonical()); }

CorpusOptions PipelineConfig::corpus_options() const {
  return {window, min_sentences, top_patterns, threads};
}

MiningOptions PipelineConfig::mining_options() const {
  return {n_pos, n_neg, seed, negatives};
}

TrainOptions PipelineConfig::train_options() const {
  TrainOptions o;
  o.epochs = epochs;
  o.learning_rate = learning_rate;
  o.mode = mode;
  o.refresh = refresh;
  o.seed = seed;
  return o;
}

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::kExtract:
      return "extract";
    case Stage::kPpmi:
      return "ppmi";
    case Stage::kMinePairs:
      return "mine-pairs";
    case Stage::kInit:
      return "init";
    case Stage::kTrain:
      return "train";
    case Stage::kEval:
      return "eval";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  for (Stage s : all_stages()) {
    if (name == stage_name(s)) return s;
  }
  throw UsageError("unknown stage '" + std::string(name) + "'");
}

std::vector<Stage> all_stages() {
  return {Stage::kExtract, Stage::kPpmi,  Stage::kMinePairs,
          Stage::kInit,    Stage::kTrain, Stage::kEval};
}

void extract_stage(const fs::path& corpus, const fs::path& stopwords,
                   const CorpusOptions& options, const fs::path& out_dir,
                   const Logger& log) {
  TokenizeStats stats;
  const auto encoded = EncodedCorpus::read_file(corpus, &stats);
  if (stats.skipped_lines > 0) {
    log_line(log, "warning: skipped " + std::to_string(stats.skipped_lines) +
                      " malformed UTF-8 line(s) in " + corpus.string());
  }
  const auto stop = stopwords.empty() ? default_stopwords() : load_stopwords(stopwords);
  const auto counts = extract_counts(encoded, options, stop);
  fs::create_directories(out_dir);
  counts.save_binary(out_dir / kCounts);
  counts.save_tsv(out_dir);
  counts.vocab.save(out_dir / kVocab);
  log_line(log, "extract: " + std::to_string(stats.sentences) + " sentences, " +
                    std::to_string(stats.tokens) + " tokens, " +
                    std::to_string(counts.pairs.size()) + " word pairs, " +
                    std::to_string(counts.patterns.size()) + " patterns, " +
                    std::to_string(counts.vocab.size()) + " words");
}

void ppmi_stage(const fs::path& counts, const fs::path& out_dir,
                const Logger& log) {
  const auto store = AssociationStore::compute_ppmi(CorpusCounts::load_binary(counts));
  store.save(out_dir / kStore);
  store.export_tsv(out_dir / kStoreTsv);
  log_line(log, "ppmi: " + std::to_string(store.entry_count()) +
                    " positive triples over " +
                    std::to_string(store.pattern_count()) + " patterns");
}

void mine_stage(const fs::path& store_path, const MiningOptions& options,
                const fs::path& out, const Logger& log) {
  const auto store = AssociationStore::load(store_path);
  const auto instances = select_train_pairs(store, options);
  save_train_set(out, store, instances);
  log_line(log, "mine-pairs: " + std::to_string(options.n_pos) + " positive, " +
                    std::to_string(options.n_neg) + " negative instances");
}

void init_stage(const fs::path& vocab_path, size_t dim, const fs::path& pretrained,
                uint64_t seed, const fs::path& out, const Logger& log) {
  const auto vocab = Vocabulary::load(vocab_path);
  EmbeddingMatrix m;
  if (pretrained.empty()) {
    m = EmbeddingMatrix::random(vocab, dim, seed);
  } else {
    auto loaded = load_pretrained(pretrained, vocab, seed);
    if (dim != 0 && loaded.matrix.dim() != dim) {
      throw UsageError("pretrained vectors have dimension " +
                       std::to_string(loaded.matrix.dim()) + ", expected " +
                       std::to_string(dim));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", loaded.coverage);
    log_line(log, "init: pretrained coverage " + std::string(buf));
    m = std::move(loaded.matrix);
  }
  m.check_finite("init");
  m.save_binary(out);
  log_line(log, "init: " + std::to_string(m.rows()) + " x " +
                    std::to_string(m.dim()));
}

TrainResult train_stage(const fs::path& store_path, const fs::path& pairs,
                        const fs::path& init, const TrainOptions& options,
                        const fs::path& out, const fs::path& metrics,
                        const Logger& log) {
  const auto store = AssociationStore::load(store_path);
  const auto instances = load_train_set(pairs, store);
  auto initial = EmbeddingMatrix::load(init);
  std::ostringstream records;
  auto result = train(instances, store, std::move(initial), options,
                      [&](const EpochMetrics& m) {
                        write_metrics_line(records, m);
                        char buf[160];
                        std::snprintf(buf, sizeof buf,
                                      "train: epoch %zu loss %.6f acc %.4f (%.2fs)",
                                      m.epoch, m.mean_loss, m.accuracy, m.seconds);
                        log_line(log, buf);
                      });
  result.embeddings.save_binary(out);
  fs::path txt = out;
  txt.replace_extension(".txt");
  result.embeddings.save_text(txt);
  if (!metrics.empty()) {
    io::write_atomically(metrics, [&](std::ostream& o) { o << records.str(); },
                         false);
  }
  return result;
}

AnalogyDataset load_dataset(const DatasetSpec& spec) {
  if (spec.format == "google") return load_google(spec.path);
  if (spec.format == "choice-tsv") return load_choice_tsv(spec.path);
  throw UsageError("unknown dataset format '" + spec.format +
                   "' (expected google or choice-tsv)");
}

std::vector<EvaluationReport> eval_stage(const fs::path& embeddings,
                                         const std::vector<DatasetSpec>& datasets,
                                         const std::vector<Measure>& measures,
                                         double epsilon, const fs::path& report,
                                         const Logger& log) {
  // Parse every dataset before evaluating anything.
  std::vector<AnalogyDataset> loaded;
  for (const auto& d : datasets) loaded.push_back(load_dataset(d));
  const auto emb = EmbeddingMatrix::load(embeddings);
  std::vector<EvaluationReport> reports;
  for (const auto& ds : loaded) {
    for (Measure m : measures) reports.push_back(evaluate(ds, emb, m, epsilon));
  }
  if (!report.empty()) {
    io::write_atomically(report, [&](std::ostream& o) { write_report_jsonl(o, reports); },
                         false);
    fs::path txt = report;
    txt.replace_extension(".txt");
    io::write_atomically(txt, [&](std::ostream& o) { write_report_table(o, reports); },
                         false);
  }
  std::ostringstream table;
  write_report_table(table, reports);
  log_line(log, table.str());
  return reports;
}

void run_stage(const PipelineConfig& config, Stage stage, const Logger& log) {
  const fs::path& out = config.out_dir;
  const StageFiles files = stage_files(stage);
  for (const auto& [name, producer] : files.inputs) {
    if (!fs::exists(out / name)) {
      throw DataError("missing artifact " + (out / name).string() +
                      "; run stage '" + stage_name(producer) + "' first");
    }
  }
  fs::create_directories(out);
  json manifest = read_manifest(out);
  const std::string cfg_hash = config.hash();
  auto& stages = manifest["stages"];

  if (stages.contains(stage_name(stage)) &&
      stages[stage_name(stage)].value("config_hash", "") != cfg_hash) {
    log_line(log, std::string("warning: config changed since stage '") +
                      stage_name(stage) + "' last ran; downstream artifacts are stale");
  }
  json inputs = json::object();
  for (const auto& [name, producer] : files.inputs) {
    const std::string sha = io::sha256_file(out / name);
    inputs[name] = sha;
    const char* prod = stage_name(producer);
    if (!stages.contains(prod)) continue;
    const auto& entry = stages[prod];
    if (entry.value("config_hash", "") != cfg_hash) {
      log_line(log, std::string("warning: stale manifest: input ") + name +
                        " was produced by '" + prod + "' under a different config");
    }
    if (entry.contains("outputs") && entry["outputs"].contains(name) &&
        entry["outputs"][name] != sha) {
      log_line(log, std::string("warning: stale manifest: ") + name +
                        " changed since stage '" + prod + "' wrote it");
    }
  }

  switch (stage) {
    case Stage::kExtract: {
      if (config.corpus.empty()) throw UsageError("config has no corpus path");
      if (!config.stopwords.empty()) inputs["stopwords"] = io::sha256_file(config.stopwords);
      inputs["corpus"] = io::sha256_file(config.corpus);
      extract_stage(config.corpus, config.stopwords, config.corpus_options(), out, log);
      break;
    }
    case Stage::kPpmi:
      ppmi_stage(out / kCounts, out, log);
      break;
    case Stage::kMinePairs:
      mine_stage(out / kStore, config.mining_options(), out / kTrainPairs, log);
      break;
    case Stage::kInit:
      if (!config.pretrained.empty()) {
        inputs["pretrained"] = io::sha256_file(config.pretrained);
      }
      init_stage(out / kVocab, config.pretrained.empty() ? config.dim : 0,
                 config.pretrained, config.seed, out / kInit, log);
      break;
    case Stage::kTrain:
      train_stage(out / kStore, out / kTrainPairs, out / kInit,
                  config.train_options(), out / kEmbeddings, out / kMetrics, log);
      break;
    case Stage::kEval:
      if (config.datasets.empty()) throw UsageError("config lists no datasets");
      for (const auto& d : config.datasets) {
        inputs[d.path.filename().string()] = io::sha256_file(d.path);
      }
      eval_stage(out / kEmbeddings, config.datasets, config.measures,
                 config.epsilon, out / kEval, log);
      break;
  }

  json outputs = json::object();
  for (const auto& name : files.outputs) outputs[name] = io::sha256_file(out / name);
  stages[stage_name(stage)] = {
      {"config_hash", cfg_hash}, {"inputs", inputs}, {"outputs", outputs}};
  io::write_atomically(out / kManifest,
                       [&](std::ostream& o) { o << manifest.dump(2) << '\n'; },
                       false);
}

std::vector<std::string> verify_manifest(const fs::path& out_dir) {
  std::vector<std::string> problems;
  const json manifest = read_manifest(out_dir);
  for (const auto& [stage, entry] : manifest["stages"].items()) {
    if (!entry.contains("outputs")) continue;
    for (const auto& [name, sha] : entry["outputs"].items()) {
      const auto path = out_dir / name;
      if (!fs::exists(path)) {
        problems.push_back(stage + ": missing " + name);
      } else if (io::sha256_file(path) != sha.get<std::string>()) {
        problems.push_back(stage + ": hash mismatch for " + name);
      }
    }
  }
  return problems;
}

std::vector<SweepPoint> run_sweep(const PipelineConfig& config,
                                  const std::string& kind,
                                  const std::vector<double>& values,
                                  const Logger& log) {
  if (kind != "dim" && kind != "pairs") {
    throw UsageError("sweep kind must be 'dim' or 'pairs'");
  }
  const fs::path store_path = config.out_dir / kStore;
  if (!fs::exists(store_path)) {
    throw DataError("missing artifact " + store_path.string() +
                    "; run stage 'ppmi' first");
  }
  const auto store = AssociationStore::load(store_path);
  std::vector<AnalogyDataset> datasets;
  for (const auto& d : config.datasets) datasets.push_back(load_dataset(d));

  std::vector<SweepPoint> points;
  for (double x : values) {
    MiningOptions mining = config.mining_options();
    size_t dim = config.dim;
    if (kind == "pairs") {
      mining.n_pos = mining.n_neg = static_cast<size_t>(x);
    } else {
      dim = static_cast<size_t>(x);
    }
    const auto instances = select_train_pairs(store, mining);
    auto init = EmbeddingMatrix::random(store.vocab(), dim, config.seed);
    auto result = train(instances, store, std::move(init), config.train_options());
    SweepPoint point{x, {}};
    for (const auto& ds : datasets) {
      for (Measure m : config.measures) {
        point.reports.push_back(evaluate(ds, result.embeddings, m, config.epsilon));
      }
    }
    log_line(log, "sweep " + kind + "=" + io::format_double(x) + " done");
    points.push_back(std::move(point));
  }
  return points;
}

void write_svg_chart(
    std::ostream& out, const std::string& title, const std::string& x_label,
    const std::vector<double>& xs,
    const std::vector<std::pair<std::string, std::vector<double>>>& series) {
  constexpr double kW = 640, kH = 400, kL = 60, kR = 160, kT = 40, kB = 50;
  const double x0 = xs.empty() ? 0 : *std::min_element(xs.begin(), xs.end());
  double x1 = xs.empty() ? 1 : *std::max_element(xs.begin(), xs.end());
  if (x1 == x0) x1 = x0 + 1;
  auto px = [&](double x) { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); };
  auto py = [&](double y) { return kH - kB - y * (kH - kT - kB); };
  static const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                        "#9467bd", "#ff7f0e", "#8c564b"};
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
                "height=\"%.0f\" font-family=\"sans-serif\" font-size=\"12\">\n",
                kW, kH);
  out << buf;
  out << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title
      << "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n"
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                kL, py(0), kW - kR, py(0), kL, py(0), kL, py(1));
  out << buf;
  for (int t = 0; t <= 4; ++t) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.2f</text>\n",
                  kL - 5, py(t / 4.0) + 4, t / 4.0);
    out << buf;
  }
  for (double x : xs) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%g</text>\n",
                  px(x), py(0) + 16, x);
    out << buf;
  }
  out << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (size_t i = 0; i < xs.size() && i < series[s].second.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.1f,%.1f ", px(xs[i]), py(series[s].second[i]));
      out << buf;
    }
    out << "\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" fill=\"%s\">%s</text>\n",
                  kW - kR + 10, kT + 16.0 * static_cast<double>(s + 1), color,
                  series[s].first.c_str());
    out << buf;
  }
  out << "</svg>\n";
}

size_t write_report(
    const PipelineConfig& config,
    const std::vector<std::pair<std::string, std::vector<SweepPoint>>>& sweeps,
    std::ostream& table_out) {
  const fs::path eval_path = config.out_dir / kEval;
  std::vector<EvaluationReport> reports;
  if (fs::exists(eval_path)) {
    std::ifstream in(eval_path);
    reports = read_report_jsonl(in);
  } else {
    table_out << "notice: no evaluation results at " << eval_path.string()
              << "; run stage 'eval' first\n";
  }
  std::ostringstream table;
  write_report_table(table, reports);
  table_out << table.str();
  fs::create_directories(config.out_dir);
  io::write_atomically(config.out_dir / "report.txt",
                       [&](std::ostream& o) { o << table.str(); }, false);

  for (const auto& [kind, points] : sweeps) {
    std::vector<double> xs;
    std::vector<std::pair<std::string, std::vector<double>>> series;
    for (const auto& p : points) {
      xs.push_back(p.x);
      for (size_t i = 0; i < p.reports.size(); ++i) {
        if (series.size() <= i) {
          series.push_back({p.reports[i].dataset + "/" + p.reports[i].measure, {}});
        }
        series[i].second.push_back(p.reports[i].accuracy);
      }
    }
    io::write_atomically(
        config.out_dir / ("sweep_" + kind + ".csv"),
        [&](std::ostream& o) {
          o << kind;
          for (const auto& s : series) o << ',' << s.first;
          o << '\n';
          for (size_t i = 0; i < xs.size(); ++i) {
            o << io::format_double(xs[i]);
            for (const auto& s : series) o << ',' << io::format_double(s.second[i]);
            o << '\n';
          }
        },
        false);
    io::write_atomically(
        config.out_dir / ("sweep_" + kind + ".svg"),
        [&](std::ostream& o) {
          write_svg_chart(o, "accuracy vs " + kind, kind, xs, series);
        },
        false);
  }
  return reports.size();
}

}  // namespace relemb
