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

#ifndef RELEMB_ASSOCIATION_H_
#define RELEMB_ASSOCIATION_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relemb/corpus.h"
#include "relemb/vocabulary.h"

namespace relemb {

struct SupportEntry {
  PairId pair = 0;
  double f = 0.0;

  bool operator==(const SupportEntry&) const = default;
};

struct WordPair {
  WordId u = 0;
  WordId v = 0;

  bool operator==(const WordPair&) const = default;
};

/// Sparse positive PPMI scores between patterns and word pairs.
///
///   f(p,u,v) = max(0, ln( g(p,u,v) g(*,*,*) / (g(p,*,*) g(*,u,v)) ))
///
/// Marginals are taken over the retained universe of the input counts.
/// Only strictly positive scores are stored. Each pattern's support is
/// sorted by pair id, and since pair ids follow (u, v) order that is also
/// (u, v) order. The store is immutable after construction.
class AssociationStore {
 public:
  static AssociationStore compute_ppmi(const CorpusCounts& counts);

  size_t pattern_count() const { return patterns_.size(); }
  size_t pair_count() const { return pairs_.size(); }
  const Vocabulary& vocab() const { return vocab_; }
  const std::string& pattern_name(PatternId p) const;
  std::optional<PatternId> find_pattern(std::string_view name) const;
  const WordPair& pair(PairId id) const { return pairs_.at(id); }

  /// R(p): entries with f > 0, sorted by pair id. Throws on unknown p.
  std::span<const SupportEntry> support(PatternId p) const;
  /// |R(p)|: sum of the stored f values of p, in support order.
  double norm(PatternId p) const;
  /// Stored f for (p, pair), or nullopt when absent (clamped or unseen).
  std::optional<double> score(PatternId p, PairId pair) const;

  uint64_t total_count() const { return total_; }
  uint64_t pattern_marginal(PatternId p) const { return pattern_marginal_.at(p); }
  uint64_t pair_marginal(PairId pair) const { return pair_marginal_.at(pair); }
  size_t entry_count() const;

  /// Patterns whose support mentions word w, ascending.
  std::span<const PatternId> patterns_of_word(WordId w) const;

  /// Binary store: header, vocabulary, names, marginals, sorted triples.
  void save(const std::filesystem::path& path) const;
  static AssociationStore load(const std::filesystem::path& path);
  /// `pattern \t u \t v \t f` per stored triple.
  void export_tsv(const std::filesystem::path& path) const;

 private:
  void finalize();
  void check_pattern(PatternId p) const;

  Vocabulary vocab_;
  Vocabulary patterns_;
  std::vector<WordPair> pairs_;
  uint64_t total_ = 0;
  std::vector<uint64_t> pattern_marginal_;
  std::vector<uint64_t> pair_marginal_;
  std::vector<std::vector<SupportEntry>> support_;
  std::vector<double> norms_;
  std::vector<std::vector<PatternId>> word_patterns_;
};

}  // namespace relemb

#endif  // RELEMB_ASSOCIATION_H_
