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

// Generator for a small corpus with planted relations.
//
// Each relation owns a set of word pairs and a set of connecting phrases.
// A sentence places one pair around one of its relation's phrases, padded
// with filler words, so word pairs of the same relation share patterns.
// A small fraction of sentences borrow another relation's phrase. Analogy
// questions over the planted pairs are emitted alongside the text.

#ifndef RELEMB_SYNTHETIC_H_
#define RELEMB_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace relemb {

struct SyntheticOptions {
  size_t relations = 6;
  size_t pairs_per_relation = 10;
  size_t phrases_per_relation = 10;
  /// Fraction of a relation's phrases each pair is seen with.
  double phrase_coverage = 0.6;
  size_t sentences = 15000;
  /// Probability that a sentence uses the pair's borrowed phrase from
  /// another relation.
  double noise = 0.1;
  size_t filler_words = 600;
  uint64_t seed = 7;
};

struct PlantedRelation {
  std::string name;  // "gram-*" names mark syntactic sections
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::vector<std::string>> phrases;
};

struct SyntheticCorpus {
  std::vector<PlantedRelation> relations;
  std::string text;              // one sentence per line
  std::string google_questions;  // ": section" + "a b c d" lines
  std::string choice_questions;  // choice TSV with 5 candidates
  size_t token_count = 0;
};

SyntheticCorpus generate_synthetic(const SyntheticOptions& options);

/// Writes corpus.txt, questions-words.txt, choice.tsv and stopwords.txt.
void write_synthetic(const SyntheticCorpus& corpus,
                     const std::filesystem::path& dir);

}  // namespace relemb

#endif  // RELEMB_SYNTHETIC_H_
