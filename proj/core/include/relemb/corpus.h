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

// Word-pair and lexical-pattern co-occurrence counting.
//
// A word pair (u, v) is ordered by textual occurrence: u precedes v in the
// sentence at a token distance of at most `window`. A lexical pattern is a
// unigram or contiguous bigram taken from the tokens strictly between u and
// v, written "X <ngram> Y" with bigram tokens joined by '_'.

#ifndef RELEMB_CORPUS_H_
#define RELEMB_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "relemb/tokenizer.h"
#include "relemb/vocabulary.h"

namespace relemb {

/// Corpus held as a flat array of word ids with sentence offsets.
class EncodedCorpus {
 public:
  static EncodedCorpus read(std::istream& in, TokenizeStats* stats = nullptr);
  static EncodedCorpus read_file(const std::filesystem::path& path,
                                 TokenizeStats* stats = nullptr);
  static EncodedCorpus from_sentences(std::span<const Sentence> sentences);

  void add_sentence(const Sentence& sentence);

  const Vocabulary& vocab() const { return vocab_; }
  size_t sentence_count() const { return offsets_.size() - 1; }
  size_t token_count() const { return tokens_.size(); }
  std::span<const WordId> sentence(size_t i) const {
    return std::span<const WordId>(tokens_).subspan(
        offsets_[i], offsets_[i + 1] - offsets_[i]);
  }

 private:
  Vocabulary vocab_;
  std::vector<WordId> tokens_;
  std::vector<size_t> offsets_{0};
};

using StopWordSet = std::unordered_set<std::string>;

/// A short English function-word list.
StopWordSet default_stopwords();
/// One word per line; '#' starts a comment.
StopWordSet load_stopwords(const std::filesystem::path& path);

struct WordPairStats {
  WordId u = 0;
  WordId v = 0;
  uint64_t sentence_count = 0;

  bool operator==(const WordPairStats&) const = default;
};

struct PatternCount {
  PatternId pattern = 0;
  PairId pair = 0;
  uint64_t count = 0;

  bool operator==(const PatternCount&) const = default;
};

/// Counts, for every ordered word pair within `window` tokens of each other,
/// the number of sentences in which it occurs. Pairs of two stop words, pairs
/// of identical words, and pairs with a non-word token are skipped. Returns
/// pairs with sentence_count >= min_sentence_count, sorted by (u, v).
std::vector<WordPairStats> extract_word_pairs(const EncodedCorpus& corpus,
                                              int window,
                                              uint64_t min_sentence_count,
                                              const StopWordSet& stopwords,
                                              unsigned threads = 1);

/// Raw pattern counts over all extracted patterns. `counts` is sorted by
/// (pattern, pair); pair ids index the `pairs` argument of extract_patterns.
struct PatternTable {
  std::vector<std::string> patterns;
  std::vector<uint64_t> totals;
  std::vector<PatternCount> counts;
};

PatternTable extract_patterns(const EncodedCorpus& corpus,
                              std::span<const WordPairStats> pairs, int window,
                              unsigned threads = 1);

/// The `k` patterns with the largest totals, ties broken by ascending
/// pattern string, returned in rank order.
std::vector<PatternId> select_top_patterns(std::span<const uint64_t> totals,
                                           std::span<const std::string> names,
                                           size_t k);

struct CorpusOptions {
  int window = 5;
  uint64_t min_sentence_count = 50;
  size_t top_patterns = 10000;
  unsigned threads = 1;
};

/// The retained universe after pair filtering and top-K pattern selection.
/// The vocabulary holds exactly the words of the retained pairs, sorted;
/// pairs are sorted by (u, v); patterns are in rank order; counts are
/// sorted by (pattern, pair).
struct CorpusCounts {
  Vocabulary vocab;
  std::vector<WordPairStats> pairs;
  std::vector<std::string> patterns;
  std::vector<PatternCount> counts;

  /// Sum over pairs of g(p, u, v).
  std::vector<uint64_t> pattern_totals() const;

  /// Writes `pairs.tsv` (u, v, sentence_count) and `patterns.tsv`
  /// (pattern, u, v, count) into `dir`.
  void save_tsv(const std::filesystem::path& dir) const;
  static CorpusCounts load_tsv(const std::filesystem::path& dir);

  void save_binary(const std::filesystem::path& path) const;
  static CorpusCounts load_binary(const std::filesystem::path& path);

  bool operator==(const CorpusCounts&) const = default;
};

CorpusCounts extract_counts(const EncodedCorpus& corpus,
                            const CorpusOptions& options,
                            const StopWordSet& stopwords);

}  // namespace relemb

#endif  // RELEMB_CORPUS_H_
