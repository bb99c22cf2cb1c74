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

#include "relemb/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "relemb/error.h"

namespace relemb {
namespace {

// Adds the signed f of each support pair to h[u] and h[v]. The index and
// the naive path both go through this, so their H values agree bit for bit.
template <typename Sink>
void accumulate_h(const AssociationStore& store, PatternId p, Sink&& add) {
  for (const auto& e : store.support(p)) {
    const WordPair& wp = store.pair(e.pair);
    add(wp.u, e.f);
    add(wp.v, -e.f);
  }
}

void word_gradient_into(double coef, double h1_over_r1, double h2_over_r2,
                        std::span<const double> p1, std::span<const double> p2,
                        std::span<double> out) {
  for (size_t k = 0; k < out.size(); ++k) {
    out[k] = coef * (h1_over_r1 * p2[k] + h2_over_r2 * p1[k]);
  }
}

uint64_t epoch_seed(uint64_t seed, size_t epoch) {
  return seed + 0x9e3779b97f4a7c15ull * static_cast<uint64_t>(epoch);
}

}  // namespace

void pattern_embedding_into(PatternId p, const EmbeddingMatrix& embeddings,
                            const AssociationStore& store,
                            std::span<double> out) {
  const auto sup = store.support(p);
  if (sup.empty()) {
    throw DataError("pattern '" + store.pattern_name(p) +
                    "' has empty support; filter it before training");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& e : sup) {
    const WordPair& wp = store.pair(e.pair);
    const auto u = embeddings.row(wp.u);
    const auto v = embeddings.row(wp.v);
    for (size_t k = 0; k < out.size(); ++k) out[k] += e.f * (u[k] - v[k]);
  }
  const double norm = store.norm(p);
  for (double& x : out) x /= norm;
}

std::vector<double> pattern_embedding(PatternId p,
                                      const EmbeddingMatrix& embeddings,
                                      const AssociationStore& store) {
  std::vector<double> out(embeddings.dim());
  pattern_embedding_into(p, embeddings, store, out);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double predict(std::span<const double> p1, std::span<const double> p2) {
  return std::tanh(dot(p1, p2));
}

double instance_loss(int target, std::span<const double> p1,
                     std::span<const double> p2) {
  const double r = static_cast<double>(target) - predict(p1, p2);
  return 0.5 * r * r;
}

PatternWordIndex PatternWordIndex::build(const AssociationStore& store) {
  PatternWordIndex index;
  index.by_pattern_.resize(store.pattern_count());
  index.by_word_.resize(store.vocab().size());
  std::vector<double> h(store.vocab().size(), 0.0);
  std::vector<uint8_t> touched(store.vocab().size(), 0);
  std::vector<WordId> words;
  for (PatternId p = 0; p < store.pattern_count(); ++p) {
    words.clear();
    accumulate_h(store, p, [&](WordId w, double f) {
      if (!touched[w]) {
        touched[w] = 1;
        words.push_back(w);
      }
      h[w] += f;
    });
    std::sort(words.begin(), words.end());
    auto& list = index.by_pattern_[p];
    list.reserve(words.size());
    for (WordId w : words) {
      list.push_back({w, h[w]});
      index.by_word_[w].push_back({p, h[w]});
      h[w] = 0.0;
      touched[w] = 0;
    }
  }
  return index;
}

double PatternWordIndex::weight(PatternId p, WordId x) const {
  const auto list = words_of(p);
  auto it = std::lower_bound(
      list.begin(), list.end(), x,
      [](const WordWeight& e, WordId w) { return e.word < w; });
  return (it != list.end() && it->word == x) ? it->h : 0.0;
}

double pattern_word_weight(const AssociationStore& store, PatternId p,
                           WordId x) {
  double h = 0.0;
  accumulate_h(store, p, [&](WordId w, double f) {
    if (w == x) h += f;
  });
  return h;
}

std::vector<double> gradient_word(WordId x, const TrainInstance& instance,
                                  const EmbeddingMatrix& embeddings,
                                  const AssociationStore& store,
                                  const PatternWordIndex& index) {
  const auto p1 = pattern_embedding(instance.p1, embeddings, store);
  const auto p2 = pattern_embedding(instance.p2, embeddings, store);
  const double s = predict(p1, p2);
  const double coef = (1.0 - s * s) * (s - instance.target);
  std::vector<double> grad(embeddings.dim());
  word_gradient_into(coef, index.weight(instance.p1, x) / store.norm(instance.p1),
                     index.weight(instance.p2, x) / store.norm(instance.p2), p1,
                     p2, grad);
  return grad;
}

AdaGrad::AdaGrad(size_t rows, size_t dim, double learning_rate)
    : dim_(dim), lr_(learning_rate), acc_(rows * dim, 0.0) {
  if (!(learning_rate > 0.0)) {
    throw UsageError("learning rate must be positive");
  }
}

void AdaGrad::step(WordId w, std::span<double> x, std::span<const double> grad) {
  for (double g : grad) {
    if (!std::isfinite(g)) {
      throw DivergenceError("non-finite gradient for word id " +
                            std::to_string(w));
    }
  }
  double* acc = acc_.data() + static_cast<size_t>(w) * dim_;
  for (size_t k = 0; k < dim_; ++k) {
    acc[k] += grad[k] * grad[k];
    x[k] -= lr_ / std::sqrt(acc[k] + kEpsilon) * grad[k];
  }
}

Trainer::Trainer(const AssociationStore& store, EmbeddingMatrix initial,
                 std::vector<TrainInstance> instances, TrainOptions options)
    : store_(store),
      embeddings_(std::move(initial)),
      instances_(std::move(instances)),
      options_(options),
      index_(PatternWordIndex::build(store)),
      adagrad_(embeddings_.rows(), embeddings_.dim(), options.learning_rate),
      dim_(embeddings_.dim()) {
  if (!(embeddings_.vocab() == store.vocab())) {
    throw DataError("embedding vocabulary does not match the store vocabulary (" +
                    std::to_string(embeddings_.rows()) + " vs " +
                    std::to_string(store.vocab().size()) + " words)");
  }
  std::vector<uint8_t> used(store.pattern_count(), 0);
  for (const auto& inst : instances_) {
    for (PatternId p : {inst.p1, inst.p2}) {
      if (store.support(p).empty()) {
        throw DataError("training pattern '" + store.pattern_name(p) +
                        "' has empty support");
      }
      used[p] = 1;
    }
    if (inst.p1 == inst.p2) throw DataError("instance pairs a pattern with itself");
    if (inst.target != 0 && inst.target != 1) {
      throw DataError("instance target must be 0 or 1");
    }
  }
  for (PatternId p = 0; p < used.size(); ++p) {
    if (used[p]) used_patterns_.push_back(p);
  }
  pattern_vectors_.assign(store.pattern_count() * dim_, 0.0);
  stale_.assign(store.pattern_count(), 1);
  grad_.resize(dim_);
  if (options_.mode == TrainMode::kNaive) {
    h1_dense_.assign(embeddings_.rows(), 0.0);
    h2_dense_.assign(embeddings_.rows(), 0.0);
  }
}

std::vector<TrainInstance> Trainer::epoch_order(size_t epoch) const {
  std::vector<TrainInstance> order = instances_;
  if (options_.reshuffle) shuffle_instances(order, epoch_seed(options_.seed, epoch));
  return order;
}

void Trainer::refresh_pattern(PatternId p) {
  pattern_embedding_into(
      p, embeddings_, store_,
      std::span<double>(pattern_vectors_).subspan(static_cast<size_t>(p) * dim_,
                                                  dim_));
  stale_[p] = 0;
  ++refreshes_;
}

void Trainer::apply(WordId w, double h1, double h2, double coef,
                    std::span<const double> p1, std::span<const double> p2) {
  word_gradient_into(coef, h1, h2, p1, p2, grad_);
  adagrad_.step(w, embeddings_.row(w), grad_);
  ++word_updates_;
}

void Trainer::process_naive(const TrainInstance& inst, double coef) {
  const auto p1 = std::span<const double>(pattern_vectors_)
                      .subspan(static_cast<size_t>(inst.p1) * dim_, dim_);
  const auto p2 = std::span<const double>(pattern_vectors_)
                      .subspan(static_cast<size_t>(inst.p2) * dim_, dim_);
  accumulate_h(store_, inst.p1, [&](WordId w, double f) { h1_dense_[w] += f; });
  accumulate_h(store_, inst.p2, [&](WordId w, double f) { h2_dense_[w] += f; });
  const double r1 = store_.norm(inst.p1);
  const double r2 = store_.norm(inst.p2);
  for (WordId w = 0; w < embeddings_.rows(); ++w) {
    apply(w, h1_dense_[w] / r1, h2_dense_[w] / r2, coef, p1, p2);
  }
  std::fill(h1_dense_.begin(), h1_dense_.end(), 0.0);
  std::fill(h2_dense_.begin(), h2_dense_.end(), 0.0);
}

void Trainer::process_optimized(const TrainInstance& inst, double coef) {
  const auto p1 = std::span<const double>(pattern_vectors_)
                      .subspan(static_cast<size_t>(inst.p1) * dim_, dim_);
  const auto p2 = std::span<const double>(pattern_vectors_)
                      .subspan(static_cast<size_t>(inst.p2) * dim_, dim_);
  const auto a = index_.words_of(inst.p1);
  const auto b = index_.words_of(inst.p2);
  const double r1 = store_.norm(inst.p1);
  const double r2 = store_.norm(inst.p2);
  auto update = [&](WordId w, double h1, double h2) {
    apply(w, h1 / r1, h2 / r2, coef, p1, p2);
    for (const auto& pw : index_.patterns_of(w)) stale_[pw.pattern] = 1;
  };
  // Merge the two ascending word lists.
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].word < b[j].word)) {
      update(a[i].word, a[i].h, 0.0);
      ++i;
    } else if (i == a.size() || b[j].word < a[i].word) {
      update(b[j].word, 0.0, b[j].h);
      ++j;
    } else {
      update(a[i].word, a[i].h, b[j].h);
      ++i;
      ++j;
    }
  }
}

EpochMetrics Trainer::run_epoch() {
  const auto start = std::chrono::steady_clock::now();
  ++epoch_;
  refreshes_ = 0;
  word_updates_ = 0;

  if (options_.mode == TrainMode::kNaive) {
    for (PatternId p = 0; p < store_.pattern_count(); ++p) {
      if (!store_.support(p).empty()) refresh_pattern(p);
    }
  } else if (options_.refresh == PatternRefresh::kEpoch) {
    for (PatternId p : used_patterns_) {
      if (stale_[p]) refresh_pattern(p);
    }
  }

  const auto order = epoch_order(epoch_);
  double loss_sum = 0.0;
  size_t correct = 0;
  for (size_t n = 0; n < order.size(); ++n) {
    const TrainInstance& inst = order[n];
    if (options_.mode == TrainMode::kOptimized &&
        options_.refresh == PatternRefresh::kLazy) {
      if (stale_[inst.p1]) refresh_pattern(inst.p1);
      if (stale_[inst.p2]) refresh_pattern(inst.p2);
    }
    const auto p1 = std::span<const double>(pattern_vectors_)
                        .subspan(static_cast<size_t>(inst.p1) * dim_, dim_);
    const auto p2 = std::span<const double>(pattern_vectors_)
                        .subspan(static_cast<size_t>(inst.p2) * dim_, dim_);
    const double s = predict(p1, p2);
    const double r = static_cast<double>(inst.target) - s;
    const double loss = 0.5 * r * r;
    if (!std::isfinite(loss)) {
      throw DivergenceError("non-finite loss at epoch " + std::to_string(epoch_) +
                            ", instance " + std::to_string(n) + " ('" +
                            store_.pattern_name(inst.p1) + "', '" +
                            store_.pattern_name(inst.p2) + "')");
    }
    loss_sum += loss;
    if ((s >= 0.5 ? 1 : 0) == inst.target) ++correct;
    const double coef = (1.0 - s * s) * (s - inst.target);
    try {
      if (options_.mode == TrainMode::kNaive) {
        process_naive(inst, coef);
      } else {
        process_optimized(inst, coef);
      }
    } catch (const DivergenceError& e) {
      throw DivergenceError(std::string(e.what()) + " at epoch " +
                            std::to_string(epoch_) + ", instance " +
                            std::to_string(n));
    }
  }

  EpochMetrics m;
  m.epoch = epoch_;
  m.instances = order.size();
  m.mean_loss = order.empty() ? 0.0 : loss_sum / static_cast<double>(order.size());
  m.accuracy = order.empty() ? 0.0
                             : static_cast<double>(correct) /
                                   static_cast<double>(order.size());
  m.pattern_refreshes = refreshes_;
  m.word_updates = word_updates_;
  m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count();
  return m;
}

TrainResult train(const std::vector<TrainInstance>& instances,
                  const AssociationStore& store, EmbeddingMatrix initial,
                  const TrainOptions& options,
                  const std::function<void(const EpochMetrics&)>& on_epoch) {
  if (options.epochs < 1) throw UsageError("epochs must be >= 1");
  Trainer trainer(store, std::move(initial), instances, options);
  TrainResult result;
  for (size_t e = 0; e < options.epochs; ++e) {
    result.epochs.push_back(trainer.run_epoch());
    if (on_epoch) on_epoch(result.epochs.back());
  }
  trainer.embeddings().check_finite("after training");
  result.embeddings = trainer.release();
  return result;
}

std::pair<double, double> evaluate_instances(
    std::span<const TrainInstance> instances, const AssociationStore& store,
    const EmbeddingMatrix& embeddings) {
  if (instances.empty()) return {0.0, 0.0};
  double loss = 0.0;
  size_t correct = 0;
  std::vector<double> p1(embeddings.dim()), p2(embeddings.dim());
  for (const auto& inst : instances) {
    pattern_embedding_into(inst.p1, embeddings, store, p1);
    pattern_embedding_into(inst.p2, embeddings, store, p2);
    const double s = predict(p1, p2);
    loss += 0.5 * (inst.target - s) * (inst.target - s);
    if ((s >= 0.5 ? 1 : 0) == inst.target) ++correct;
  }
  const auto n = static_cast<double>(instances.size());
  return {loss / n, static_cast<double>(correct) / n};
}

}  // namespace relemb
