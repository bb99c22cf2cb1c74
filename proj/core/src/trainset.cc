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

#include "relemb/trainset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "relemb/error.h"
#include "relemb/io.h"

namespace relemb {
namespace {

double l2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

bool ranks_before(const ScoredPatternPair& a, const ScoredPatternPair& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  if (a.p1 != b.p1) return a.p1 < b.p1;
  return a.p2 < b.p2;
}

}  // namespace

SparseVector pattern_feature_vector(const AssociationStore& store, PatternId p) {
  const auto sup = store.support(p);
  if (sup.empty()) {
    throw DataError("pattern '" + store.pattern_name(p) +
                    "' has empty support and cannot be ranked");
  }
  SparseVector v;
  v.dim = store.pair_count();
  v.index.reserve(sup.size());
  v.value.reserve(sup.size());
  for (const auto& e : sup) {
    v.index.push_back(e.pair);
    v.value.push_back(e.f);
  }
  return v;
}

double sparse_cosine(const SparseVector& a, const SparseVector& b) {
  const double na = l2(a.value);
  const double nb = l2(b.value);
  if (na == 0.0 || nb == 0.0) {
    throw DataError("sparse_cosine: zero vector");
  }
  double dot = 0.0;
  size_t i = 0, j = 0;
  while (i < a.index.size() && j < b.index.size()) {
    if (a.index[i] < b.index[j]) {
      ++i;
    } else if (a.index[i] > b.index[j]) {
      ++j;
    } else {
      dot += a.value[i++] * b.value[j++];
    }
  }
  return std::min(1.0, dot / (na * nb));
}

std::vector<ScoredPatternPair> rank_pattern_pairs(
    const AssociationStore& store) {
  const size_t k = store.pattern_count();
  struct Posting {
    PatternId pattern;
    double f;
  };
  std::vector<std::vector<Posting>> postings(store.pair_count());
  std::vector<double> norms(k, 0.0);
  for (PatternId p = 0; p < k; ++p) {
    double s = 0.0;
    for (const auto& e : store.support(p)) {
      postings[e.pair].push_back({p, e.f});
      s += e.f * e.f;
    }
    norms[p] = std::sqrt(s);
  }

  std::vector<ScoredPatternPair> ranked;
  std::vector<double> dot(k, 0.0);
  std::vector<PatternId> touched;
  for (PatternId p = 0; p < k; ++p) {
    touched.clear();
    // Accumulating in ascending pair order reproduces a dense dot product
    // term for term.
    for (const auto& e : store.support(p)) {
      const auto& list = postings[e.pair];
      auto it = std::upper_bound(
          list.begin(), list.end(), p,
          [](PatternId id, const Posting& q) { return id < q.pattern; });
      for (; it != list.end(); ++it) {
        if (dot[it->pattern] == 0.0) touched.push_back(it->pattern);
        dot[it->pattern] += e.f * it->f;
      }
    }
    for (PatternId q : touched) {
      const double sim = std::min(1.0, dot[q] / (norms[p] * norms[q]));
      if (sim > 0.0) ranked.push_back({p, q, sim});
      dot[q] = 0.0;
    }
  }
  std::sort(ranked.begin(), ranked.end(), ranks_before);
  return ranked;
}

void shuffle_instances(std::vector<TrainInstance>& instances, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::shuffle(instances.begin(), instances.end(), rng);
}

std::vector<TrainInstance> select_train_pairs(const AssociationStore& store,
                                              const MiningOptions& options) {
  const auto ranked = rank_pattern_pairs(store);
  if (options.n_pos + options.n_neg > ranked.size()) {
    throw DataError("need " + std::to_string(options.n_pos) + " positive + " +
                    std::to_string(options.n_neg) +
                    " negative pattern pairs but only " +
                    std::to_string(ranked.size()) +
                    " pairs have non-zero similarity");
  }
  std::vector<TrainInstance> out;
  out.reserve(options.n_pos + options.n_neg);
  for (size_t i = 0; i < options.n_pos; ++i) {
    out.push_back({ranked[i].p1, ranked[i].p2, 1, ranked[i].similarity});
  }

  std::vector<size_t> neg;
  if (options.negatives == NegativeSampling::kBottom) {
    for (size_t i = ranked.size() - options.n_neg; i < ranked.size(); ++i) {
      neg.push_back(i);
    }
  } else {
    const size_t decile = (ranked.size() + 9) / 10;
    const size_t window = std::min(ranked.size() - options.n_pos,
                                   std::max(options.n_neg, decile));
    std::vector<size_t> pool(window);
    std::iota(pool.begin(), pool.end(), ranked.size() - window);
    std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ull);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(options.n_neg);
    std::sort(pool.begin(), pool.end());
    neg = std::move(pool);
  }
  for (size_t i : neg) {
    out.push_back({ranked[i].p1, ranked[i].p2, 0, ranked[i].similarity});
  }
  shuffle_instances(out, options.seed);
  return out;
}

void save_train_set(const std::filesystem::path& path,
                    const AssociationStore& store,
                    const std::vector<TrainInstance>& instances) {
  io::write_atomically(
      path,
      [&](std::ostream& out) {
        for (const auto& t : instances) {
          out << store.pattern_name(t.p1) << '\t' << store.pattern_name(t.p2)
              << '\t' << t.target << '\t'
              << io::format_double(t.mined_similarity) << '\n';
        }
      },
      false);
}

std::vector<TrainInstance> load_train_set(const std::filesystem::path& path,
                                          const AssociationStore& store) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open train set " + path.string());
  std::vector<TrainInstance> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string ctx = path.string() + ":" + std::to_string(lineno);
    const auto f = io::split(line, '\t');
    if (f.size() != 4) throw DataError(ctx + ": expected 4 fields");
    const auto p1 = store.find_pattern(f[0]);
    const auto p2 = store.find_pattern(f[1]);
    if (!p1 || !p2) throw DataError(ctx + ": pattern not in store");
    const auto t = io::parse_int(f[2], ctx);
    if (t != 0 && t != 1) throw DataError(ctx + ": target must be 0 or 1");
    if (*p1 == *p2) throw DataError(ctx + ": instance pairs a pattern with itself");
    out.push_back({*p1, *p2, static_cast<int>(t), io::parse_double(f[3], ctx)});
  }
  return out;
}

}  // namespace relemb
