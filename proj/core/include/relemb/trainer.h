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

// Learning word vectors from labelled pattern pairs.
//
// A pattern is embedded as the PPMI-weighted mean of the word-vector
// differences over its support:
//
//   p = (1/|R(p)|) * sum_{(u,v) in R(p)} f(p,u,v) (u - v)
//
// and a pattern pair (p1, p2, t) is scored with tanh(p1 . p2) under the loss
// L = 1/2 (t - tanh(p1 . p2))^2. The gradient with respect to a word x is
//
//   dL/dx = (1 - s^2)(s - t) [ H(p1,x)/|R(p1)| p2 + H(p2,x)/|R(p2)| p1 ]
//
// with s = tanh(p1 . p2) and H(p,x) the summed f of support pairs where x is
// the first word minus those where x is the second word. Words with
// H(p1,x) = H(p2,x) = 0 have zero gradient. Updates use per-dimension
// AdaGrad.

#ifndef RELEMB_TRAINER_H_
#define RELEMB_TRAINER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "relemb/association.h"
#include "relemb/embedding.h"
#include "relemb/trainset.h"

namespace relemb {

/// Writes the embedding of pattern p into `out` (size dim). Throws
/// DataError when p has an empty support.
void pattern_embedding_into(PatternId p, const EmbeddingMatrix& embeddings,
                            const AssociationStore& store, std::span<double> out);
std::vector<double> pattern_embedding(PatternId p,
                                      const EmbeddingMatrix& embeddings,
                                      const AssociationStore& store);

double dot(std::span<const double> a, std::span<const double> b);

/// tanh of the inner product.
double predict(std::span<const double> p1, std::span<const double> p2);

/// 1/2 (t - predict(p1, p2))^2.
double instance_loss(int target, std::span<const double> p1,
                     std::span<const double> p2);

struct WordWeight {
  WordId word = 0;
  double h = 0.0;
};

struct PatternWeight {
  PatternId pattern = 0;
  double h = 0.0;
};

/// H(p, x) for every pattern p and every word x of its support, in both
/// directions.
class PatternWordIndex {
 public:
  static PatternWordIndex build(const AssociationStore& store);

  /// Support words of p with H(p, x), ascending by word.
  std::span<const WordWeight> words_of(PatternId p) const {
    return by_pattern_.at(p);
  }
  /// Patterns mentioning x with H(p, x), ascending by pattern.
  std::span<const PatternWeight> patterns_of(WordId x) const {
    return by_word_.at(x);
  }
  /// H(p, x); zero when x is not in the support of p.
  double weight(PatternId p, WordId x) const;

 private:
  std::vector<std::vector<WordWeight>> by_pattern_;
  std::vector<std::vector<PatternWeight>> by_word_;
};

/// H(p, x) recomputed by scanning R(p).
double pattern_word_weight(const AssociationStore& store, PatternId p, WordId x);

/// dL/dx for one instance, with both pattern vectors computed from the
/// current `embeddings`.
std::vector<double> gradient_word(WordId x, const TrainInstance& instance,
                                  const EmbeddingMatrix& embeddings,
                                  const AssociationStore& store,
                                  const PatternWordIndex& index);

/// Per-dimension AdaGrad: acc += g^2; x -= lr / sqrt(acc + eps) * g.
class AdaGrad {
 public:
  static constexpr double kEpsilon = 1e-8;

  AdaGrad(size_t rows, size_t dim, double learning_rate);

  /// Throws DivergenceError when `grad` has a non-finite entry.
  void step(WordId w, std::span<double> x, std::span<const double> grad);

  std::span<const double> accumulator(WordId w) const {
    return std::span<const double>(acc_).subspan(static_cast<size_t>(w) * dim_,
                                                 dim_);
  }
  double learning_rate() const { return lr_; }

 private:
  size_t dim_;
  double lr_;
  std::vector<double> acc_;
};

enum class TrainMode {
  /// Every pattern vector recomputed at each epoch start; every vocabulary
  /// word visited for every instance.
  kNaive,
  /// Only stale pattern vectors recomputed; only support words visited.
  kOptimized,
};

enum class PatternRefresh {
  /// Pattern vectors stay fixed for the whole epoch (same schedule as
  /// kNaive, so the two modes agree).
  kEpoch,
  /// A stale pattern vector is recomputed as soon as an instance uses it.
  kLazy,
};

struct TrainOptions {
  size_t epochs = 10;
  double learning_rate = 0.01;
  TrainMode mode = TrainMode::kOptimized;
  PatternRefresh refresh = PatternRefresh::kEpoch;
  /// Reshuffle the instance order at each epoch with a seed derived from
  /// `seed` and the epoch number; otherwise the given order is kept.
  bool reshuffle = true;
  uint64_t seed = 7;
};

struct EpochMetrics {
  size_t epoch = 0;  // 1-based
  double mean_loss = 0.0;
  double accuracy = 0.0;  // tanh output thresholded at 1/2 against t
  double seconds = 0.0;
  size_t instances = 0;
  size_t pattern_refreshes = 0;
  size_t word_updates = 0;
};

class Trainer {
 public:
  /// Throws DataError when an instance uses a pattern with empty support or
  /// the embedding vocabulary differs from the store's.
  Trainer(const AssociationStore& store, EmbeddingMatrix initial,
          std::vector<TrainInstance> instances, TrainOptions options);

  EpochMetrics run_epoch();

  const EmbeddingMatrix& embeddings() const { return embeddings_; }
  EmbeddingMatrix release() { return std::move(embeddings_); }
  const AdaGrad& adagrad() const { return adagrad_; }
  size_t epochs_done() const { return epoch_; }

  /// Instance order the next epoch will use.
  std::vector<TrainInstance> epoch_order(size_t epoch) const;

 private:
  void refresh_pattern(PatternId p);
  void process_naive(const TrainInstance& inst, double coef);
  void process_optimized(const TrainInstance& inst, double coef);
  void apply(WordId w, double h1, double h2, double coef,
             std::span<const double> p1, std::span<const double> p2);

  const AssociationStore& store_;
  EmbeddingMatrix embeddings_;
  std::vector<TrainInstance> instances_;
  TrainOptions options_;
  PatternWordIndex index_;
  AdaGrad adagrad_;
  size_t dim_;
  std::vector<double> pattern_vectors_;  // K x dim
  std::vector<uint8_t> stale_;
  std::vector<PatternId> used_patterns_;
  std::vector<double> grad_;
  std::vector<double> h1_dense_, h2_dense_;
  size_t epoch_ = 0;
  size_t refreshes_ = 0;
  size_t word_updates_ = 0;
};

struct TrainResult {
  EmbeddingMatrix embeddings;
  std::vector<EpochMetrics> epochs;
};

TrainResult train(const std::vector<TrainInstance>& instances,
                  const AssociationStore& store, EmbeddingMatrix initial,
                  const TrainOptions& options,
                  const std::function<void(const EpochMetrics&)>& on_epoch = {});

/// Mean loss and accuracy of `instances` with pattern vectors computed from
/// the current embeddings.
std::pair<double, double> evaluate_instances(
    std::span<const TrainInstance> instances, const AssociationStore& store,
    const EmbeddingMatrix& embeddings);

}  // namespace relemb

#endif  // RELEMB_TRAINER_H_
