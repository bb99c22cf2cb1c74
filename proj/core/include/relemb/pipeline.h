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

// Pipeline stages and their on-disk artifacts.
//
//   extract     corpus        -> counts.bin, pairs.tsv, patterns.tsv, vocab.txt
//   ppmi        counts.bin    -> store.bin, store.tsv
//   mine-pairs  store.bin     -> trainpairs.tsv
//   init        vocab.txt     -> init.bin
//   train       store, pairs, init.bin -> embeddings.bin, embeddings.txt,
//                                         train_metrics.jsonl
//   eval        embeddings.bin -> eval.jsonl, eval.txt
//
// run_stage() writes every artifact atomically and records the config hash
// plus SHA-256 of inputs and outputs in manifest.json.

#ifndef RELEMB_PIPELINE_H_
#define RELEMB_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "relemb/analogy.h"
#include "relemb/corpus.h"
#include "relemb/trainer.h"
#include "relemb/trainset.h"

namespace relemb {

struct DatasetSpec {
  std::filesystem::path path;
  std::string format = "google";  // or "choice-tsv"

  bool operator==(const DatasetSpec&) const = default;
};

struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path stopwords;  // empty: built-in list
  std::filesystem::path out_dir = "relemb_out";
  int window = 5;
  uint64_t min_sentences = 50;
  size_t top_patterns = 10000;
  size_t n_pos = 50000;
  size_t n_neg = 50000;
  NegativeSampling negatives = NegativeSampling::kBottom;
  size_t dim = 300;
  size_t epochs = 10;
  double learning_rate = 0.01;
  TrainMode mode = TrainMode::kOptimized;
  PatternRefresh refresh = PatternRefresh::kEpoch;
  uint64_t seed = 7;
  std::filesystem::path pretrained;
  std::vector<DatasetSpec> datasets;
  std::vector<Measure> measures = {Measure::kCosAdd, Measure::kCosMult,
                                   Measure::kPairDiff};
  double epsilon = kCosMultEpsilon;
  unsigned threads = 1;

  /// Sets one key from its text form. Relative paths resolve against
  /// `base`. Throws UsageError for unknown keys or bad values.
  void set(std::string_view key, std::string_view value,
           const std::filesystem::path& base = {});

  /// Reads a `key = value` file ('#' comments), then applies RELEMB_<KEY>
  /// environment overrides.
  static PipelineConfig load(const std::filesystem::path& path);
  void apply_env();

  /// Sorted `key=value` lines covering every setting.
  std::string canonical() const;
  std::string hash() const;

  CorpusOptions corpus_options() const;
  MiningOptions mining_options() const;
  TrainOptions train_options() const;
};

enum class Stage { kExtract, kPpmi, kMinePairs, kInit, kTrain, kEval };

const char* stage_name(Stage s);
Stage parse_stage(std::string_view name);
std::vector<Stage> all_stages();

/// Receives progress and warning lines.
using Logger = std::function<void(const std::string&)>;

// Stage bodies with explicit paths; the per-stage CLI subcommands call these.
void extract_stage(const std::filesystem::path& corpus,
                   const std::filesystem::path& stopwords,
                   const CorpusOptions& options,
                   const std::filesystem::path& out_dir, const Logger& log);
void ppmi_stage(const std::filesystem::path& counts,
                const std::filesystem::path& out_dir, const Logger& log);
void mine_stage(const std::filesystem::path& store,
                const MiningOptions& options, const std::filesystem::path& out,
                const Logger& log);
void init_stage(const std::filesystem::path& vocab, size_t dim,
                const std::filesystem::path& pretrained, uint64_t seed,
                const std::filesystem::path& out, const Logger& log);
/// `metrics` receives one JSON record per epoch.
TrainResult train_stage(const std::filesystem::path& store,
                        const std::filesystem::path& pairs,
                        const std::filesystem::path& init,
                        const TrainOptions& options,
                        const std::filesystem::path& out,
                        const std::filesystem::path& metrics, const Logger& log);
std::vector<EvaluationReport> eval_stage(
    const std::filesystem::path& embeddings,
    const std::vector<DatasetSpec>& datasets,
    const std::vector<Measure>& measures, double epsilon,
    const std::filesystem::path& report, const Logger& log);

AnalogyDataset load_dataset(const DatasetSpec& spec);

/// Runs one stage from the config, checking prerequisites and updating the
/// manifest. Throws DataError naming the stage to run first when an input
/// artifact is missing.
void run_stage(const PipelineConfig& config, Stage stage, const Logger& log);

/// Artifacts whose current hash differs from the manifest, as messages.
std::vector<std::string> verify_manifest(const std::filesystem::path& out_dir);

struct SweepPoint {
  double x = 0.0;
  std::vector<EvaluationReport> reports;
};

/// Retrains from the existing store for each value and evaluates.
/// kind is "dim" (embedding size) or "pairs" (n_pos = n_neg = value).
std::vector<SweepPoint> run_sweep(const PipelineConfig& config,
                                  const std::string& kind,
                                  const std::vector<double>& values,
                                  const Logger& log);

/// Writes report.txt (dataset x measure table) from eval.jsonl and, for each
/// sweep, sweep_<kind>.csv and sweep_<kind>.svg. Returns the number of
/// table rows; a missing eval.jsonl gives an empty table with a notice.
size_t write_report(const PipelineConfig& config,
                    const std::vector<std::pair<std::string,
                                                std::vector<SweepPoint>>>& sweeps,
                    std::ostream& table_out);

/// Minimal SVG line chart, one series per column.
void write_svg_chart(std::ostream& out, const std::string& title,
                     const std::string& x_label,
                     const std::vector<double>& xs,
                     const std::vector<std::pair<std::string, std::vector<double>>>&
                         series);

}  // namespace relemb

#endif  // RELEMB_PIPELINE_H_
