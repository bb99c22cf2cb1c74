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

// Mining relationally similar and dissimilar pattern pairs.
//
// Each pattern is a sparse vector of its PPMI scores over word pairs. All
// pattern pairs with a positive cosine are ranked; the head of the ranking
// gives positive instances and the tail gives negatives. Pairs with zero
// similarity share no word pair and are never used.

#ifndef RELEMB_TRAINSET_H_
#define RELEMB_TRAINSET_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "relemb/association.h"

namespace relemb {

struct SparseVector {
  std::vector<uint32_t> index;  // ascending
  std::vector<double> value;
  size_t dim = 0;
};

/// The support of p as a sparse vector over word-pair ids. Throws DataError
/// when the support is empty.
SparseVector pattern_feature_vector(const AssociationStore& store, PatternId p);

/// Cosine of two sparse vectors, clamped to at most 1. Throws DataError for
/// a zero vector.
double sparse_cosine(const SparseVector& a, const SparseVector& b);

struct ScoredPatternPair {
  PatternId p1 = 0;  // p1 < p2
  PatternId p2 = 0;
  double similarity = 0.0;

  bool operator==(const ScoredPatternPair&) const = default;
};

/// Every unordered pattern pair with positive cosine, sorted by
/// (similarity desc, p1 asc, p2 asc). Uses an inverted index from word
/// pairs to patterns, so pairs without a shared word pair are never visited.
std::vector<ScoredPatternPair> rank_pattern_pairs(const AssociationStore& store);

struct TrainInstance {
  PatternId p1 = 0;
  PatternId p2 = 0;
  int target = 0;  // 1 = relationally similar
  double mined_similarity = 0.0;

  bool operator==(const TrainInstance&) const = default;
};

enum class NegativeSampling {
  kBottom,        // the n_neg lowest-ranked pairs
  kLowestDecile,  // n_neg drawn at random from the lowest tenth
};

struct MiningOptions {
  size_t n_pos = 50000;
  size_t n_neg = 50000;
  uint64_t seed = 7;
  NegativeSampling negatives = NegativeSampling::kBottom;
};

/// Labels the top n_pos ranked pairs 1 and n_neg pairs from the bottom 0,
/// then returns the union in a seeded random order. Throws DataError when
/// fewer than n_pos + n_neg pairs have positive similarity.
std::vector<TrainInstance> select_train_pairs(const AssociationStore& store,
                                              const MiningOptions& options);

/// Fisher-Yates shuffle driven by a seeded 64-bit Mersenne twister.
void shuffle_instances(std::vector<TrainInstance>& instances, uint64_t seed);

/// `p1 \t p2 \t t \t similarity` with patterns written by name.
void save_train_set(const std::filesystem::path& path,
                    const AssociationStore& store,
                    const std::vector<TrainInstance>& instances);
std::vector<TrainInstance> load_train_set(const std::filesystem::path& path,
                                          const AssociationStore& store);

}  // namespace relemb

#endif  // RELEMB_TRAINSET_H_
