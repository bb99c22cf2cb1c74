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

// Proportional analogy scoring a:b :: c:d.
//
//   CosAdd   = cos(b - a + c, d)
//   CosMult  = C(b,d) C(c,d) / (C(a,d) + eps),  C(x,y) = (cos(x,y) + 1) / 2
//   PairDiff = cos(b - a, d - c)
//
// Open-vocabulary questions score every vocabulary word except a, b and c
// as d. Multiple-choice questions score each candidate pair (c, d) against
// the stem (a, b). Questions are never skipped: out-of-vocabulary words make
// a question wrong (open) or a candidate unselectable (choice).

#ifndef RELEMB_ANALOGY_H_
#define RELEMB_ANALOGY_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relemb/embedding.h"

namespace relemb {

enum class Measure { kCosAdd, kCosMult, kPairDiff };

const char* measure_name(Measure m);
Measure parse_measure(std::string_view name);

inline constexpr double kCosMultEpsilon = 1e-5;

struct MeasureScore {
  double value = 0.0;
  bool degenerate = false;  // a zero vector made the cosine undefined
};

/// Cosine; zero when either vector is zero.
double cosine(std::span<const double> x, std::span<const double> y);

MeasureScore cos_add(std::span<const double> a, std::span<const double> b,
                     std::span<const double> c, std::span<const double> d);
MeasureScore cos_mult(std::span<const double> a, std::span<const double> b,
                      std::span<const double> c, std::span<const double> d,
                      double epsilon = kCosMultEpsilon);
MeasureScore pair_diff(std::span<const double> a, std::span<const double> b,
                       std::span<const double> c, std::span<const double> d);

MeasureScore score(Measure m, std::span<const double> a,
                   std::span<const double> b, std::span<const double> c,
                   std::span<const double> d, double epsilon = kCosMultEpsilon);

struct OpenQuestion {
  std::string a, b, c, d;  // d is the gold answer
  std::string section;
};

struct ChoiceQuestion {
  std::string a, b;
  std::vector<std::pair<std::string, std::string>> candidates;
  size_t gold = 0;
};

struct AnalogyDataset {
  std::string name;
  std::vector<OpenQuestion> open;
  std::vector<ChoiceQuestion> choice;
};

/// Google questions-words format: ": section" headers then "a b c d" lines.
/// Words are lowercased. Throws DataError on malformed lines.
AnalogyDataset load_google(const std::filesystem::path& path);

/// Normalized multiple-choice TSV:
/// `a \t b \t c1 \t d1 \t ... \t cn \t dn \t gold` with a 0-based gold index
/// and n >= 2. Throws DataError on malformed lines.
AnalogyDataset load_choice_tsv(const std::filesystem::path& path);

struct RankedWord {
  WordId word = 0;
  double score = 0.0;
};

/// Scores every vocabulary word except a, b, c, descending by score with
/// ties broken by ascending id. Returns nullopt when a, b or c is unknown.
std::optional<std::vector<RankedWord>> solve_open_vocab(
    const OpenQuestion& q, const EmbeddingMatrix& embeddings, Measure measure,
    double epsilon = kCosMultEpsilon);

struct ChoiceAnswer {
  size_t chosen = 0;
  bool flagged = false;  // stem or every candidate out of vocabulary
  std::vector<double> scores;  // -inf for out-of-vocabulary candidates
};

/// Throws DataError when the question has fewer than two candidates.
ChoiceAnswer solve_multiple_choice(const ChoiceQuestion& q,
                                   const EmbeddingMatrix& embeddings,
                                   Measure measure,
                                   double epsilon = kCosMultEpsilon);

struct CategoryResult {
  std::string name;
  size_t total = 0;
  size_t correct = 0;
  double accuracy() const {
    return total == 0 ? 0.0 : static_cast<double>(correct) / total;
  }
};

struct EvaluationReport {
  std::string dataset;
  std::string measure;
  size_t total = 0;
  size_t answered = 0;
  size_t correct = 0;
  size_t flagged = 0;  // questions touched by out-of-vocabulary words
  double accuracy = 0.0;
  /// "semantic" / "syntactic" (sections named gram* are syntactic).
  std::vector<CategoryResult> categories;
  std::vector<CategoryResult> sections;
};

EvaluationReport evaluate(const AnalogyDataset& dataset,
                          const EmbeddingMatrix& embeddings, Measure measure,
                          double epsilon = kCosMultEpsilon);

/// One JSON object per report, one per line.
void write_report_jsonl(std::ostream& out,
                        std::span<const EvaluationReport> reports);
std::vector<EvaluationReport> read_report_jsonl(std::istream& in);
/// Fixed-width table, one row per report.
void write_report_table(std::ostream& out,
                        std::span<const EvaluationReport> reports);

}  // namespace relemb

#endif  // RELEMB_ANALOGY_H_
