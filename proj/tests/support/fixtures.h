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

// Generators, brute-force oracles and fixtures shared by the unit tests and
// the acceptance runner. Oracles here deliberately avoid the library's own
// helpers: dense arrays, plain loops, no sparse structures.

#ifndef RELEMB_TESTS_SUPPORT_FIXTURES_H_
#define RELEMB_TESTS_SUPPORT_FIXTURES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include "relemb/analogy.h"
#include "relemb/association.h"
#include "relemb/corpus.h"
#include "relemb/embedding.h"
#include "relemb/trainer.h"
#include "relemb/trainset.h"

namespace relemb::testing {

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("relemb_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline size_t pick(std::mt19937_64& rng, size_t n) {
  return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
}

/// Random count tensor over `n_patterns` x `n_pairs`. Each cell is non-zero
/// with probability `density`; counts are in [1, max_count].
inline CorpusCounts random_counts(std::mt19937_64& rng, size_t n_patterns,
                                  size_t n_pairs, double density = 0.4,
                                  uint64_t max_count = 20) {
  CorpusCounts c;
  const size_t n_words = n_pairs + 2;
  std::vector<std::string> words;
  for (size_t i = 0; i < n_words; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "w%03zu", i);
    words.emplace_back(buf);
  }
  c.vocab = Vocabulary(words);
  std::set<std::pair<WordId, WordId>> chosen;
  while (chosen.size() < n_pairs) {
    const auto u = static_cast<WordId>(pick(rng, n_words));
    const auto v = static_cast<WordId>(pick(rng, n_words));
    if (u != v) chosen.insert({u, v});
  }
  for (const auto& [u, v] : chosen) c.pairs.push_back({u, v, 50});
  for (size_t p = 0; p < n_patterns; ++p) {
    c.patterns.push_back("X p" + std::to_string(p) + " Y");
  }
  std::bernoulli_distribution present(density);
  std::uniform_int_distribution<uint64_t> count(1, max_count);
  for (PatternId p = 0; p < n_patterns; ++p) {
    for (PairId q = 0; q < n_pairs; ++q) {
      if (present(rng)) c.counts.push_back({p, q, count(rng)});
    }
  }
  if (c.counts.empty()) c.counts.push_back({0, 0, 1});
  return c;
}

/// Dense [pattern][pair] count matrix.
inline std::vector<std::vector<uint64_t>> dense_counts(const CorpusCounts& c) {
  std::vector<std::vector<uint64_t>> g(c.patterns.size(),
                                       std::vector<uint64_t>(c.pairs.size(), 0));
  for (const auto& e : c.counts) g[e.pattern][e.pair] += e.count;
  return g;
}

/// Dense feature vectors [pattern][pair] holding the stored PPMI values.
inline std::vector<std::vector<double>> dense_features(const AssociationStore& s) {
  std::vector<std::vector<double>> x(s.pattern_count(),
                                     std::vector<double>(s.pair_count(), 0.0));
  for (PatternId p = 0; p < s.pattern_count(); ++p) {
    for (const auto& e : s.support(p)) x[p][e.pair] = e.f;
  }
  return x;
}

/// O(K^2) cosine ranking over dense vectors: every unordered pair with
/// positive cosine, sorted by (similarity desc, p1 asc, p2 asc).
inline std::vector<ScoredPatternPair> dense_ranking(const AssociationStore& s) {
  const auto x = dense_features(s);
  std::vector<double> norm(x.size(), 0.0);
  for (size_t p = 0; p < x.size(); ++p) {
    double sq = 0.0;
    for (double v : x[p]) sq += v * v;
    norm[p] = std::sqrt(sq);
  }
  std::vector<ScoredPatternPair> out;
  for (size_t a = 0; a < x.size(); ++a) {
    for (size_t b = a + 1; b < x.size(); ++b) {
      if (norm[a] == 0.0 || norm[b] == 0.0) continue;
      double d = 0.0;
      for (size_t k = 0; k < x[a].size(); ++k) d += x[a][k] * x[b][k];
      const double cs = std::min(1.0, d / (norm[a] * norm[b]));
      if (cs > 0.0) {
        out.push_back({static_cast<PatternId>(a), static_cast<PatternId>(b), cs});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
    if (l.similarity != r.similarity) return l.similarity > r.similarity;
    if (l.p1 != r.p1) return l.p1 < r.p1;
    return l.p2 < r.p2;
  });
  return out;
}

/// L for one instance, built from the definitions with plain loops.
inline double oracle_loss(const AssociationStore& s, const EmbeddingMatrix& e,
                          const TrainInstance& inst) {
  auto pattern = [&](PatternId p) {
    std::vector<double> v(e.dim(), 0.0);
    double norm = 0.0;
    for (const auto& entry : s.support(p)) {
      const auto& wp = s.pair(entry.pair);
      for (size_t k = 0; k < e.dim(); ++k) {
        v[k] += entry.f * (e.row(wp.u)[k] - e.row(wp.v)[k]);
      }
      norm += entry.f;
    }
    for (double& x : v) x /= norm;
    return v;
  };
  const auto a = pattern(inst.p1);
  const auto b = pattern(inst.p2);
  double d = 0.0;
  for (size_t k = 0; k < a.size(); ++k) d += a[k] * b[k];
  const double r = inst.target - std::tanh(d);
  return 0.5 * r * r;
}

/// A small store whose every pattern has between 1 and `max_support`
/// entries. Counts are chosen so each nonzero cell has positive PPMI:
/// every pair belongs to one pattern only.
inline CorpusCounts disjoint_counts(std::mt19937_64& rng, size_t n_patterns,
                                    size_t max_support, size_t n_words) {
  CorpusCounts c;
  std::vector<std::string> words;
  for (size_t i = 0; i < n_words; ++i) words.push_back("w" + std::to_string(100 + i));
  c.vocab = Vocabulary(words);
  std::set<std::pair<WordId, WordId>> used;
  std::vector<std::pair<PatternId, std::pair<WordId, WordId>>> cells;
  for (PatternId p = 0; p < n_patterns; ++p) {
    const size_t n = 1 + pick(rng, max_support);
    for (size_t i = 0; i < n; ++i) {
      for (int tries = 0; tries < 100; ++tries) {
        const auto u = static_cast<WordId>(pick(rng, n_words));
        const auto v = static_cast<WordId>(pick(rng, n_words));
        if (u == v || used.count({u, v})) continue;
        used.insert({u, v});
        cells.push_back({p, {u, v}});
        break;
      }
    }
  }
  for (const auto& uv : used) c.pairs.push_back({uv.first, uv.second, 50});
  for (PatternId p = 0; p < n_patterns; ++p) {
    c.patterns.push_back("X q" + std::to_string(p) + " Y");
  }
  for (const auto& [p, uv] : cells) {
    const auto it = std::find_if(c.pairs.begin(), c.pairs.end(), [&](const auto& w) {
      return w.u == uv.first && w.v == uv.second;
    });
    c.counts.push_back({p, static_cast<PairId>(it - c.pairs.begin()),
                        1 + static_cast<uint64_t>(pick(rng, 9))});
  }
  std::sort(c.counts.begin(), c.counts.end(), [](const auto& a, const auto& b) {
    return std::pair(a.pattern, a.pair) < std::pair(b.pattern, b.pair);
  });
  return c;
}

/// Embedding fixture with planted offsets: 5 relations, each with two word
/// pairs (a, a + r) and (c, c + r), 20 words in total. Base vectors and
/// relation offsets are Gaussian in 64 dimensions.
struct PlantedFixture {
  EmbeddingMatrix embeddings;
  std::vector<std::vector<std::pair<std::string, std::string>>> relations;
};

inline PlantedFixture planted_offsets(uint64_t seed = 11, size_t dim = 64) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(double(dim)));
  PlantedFixture f;
  std::vector<std::string> words;
  for (int r = 0; r < 5; ++r) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int i = 0; i < 2; ++i) {
      const std::string base = "r" + std::to_string(r) + "w" + std::to_string(i);
      pairs.emplace_back(base + "a", base + "b");
      words.push_back(base + "a");
      words.push_back(base + "b");
    }
    f.relations.push_back(pairs);
  }
  f.embeddings = EmbeddingMatrix(Vocabulary(words), dim);
  for (int r = 0; r < 5; ++r) {
    std::vector<double> offset(dim);
    for (double& x : offset) x = normal(rng);
    for (const auto& [a, b] : f.relations[r]) {
      auto ra = f.embeddings.row(f.embeddings.vocab().at(a));
      auto rb = f.embeddings.row(f.embeddings.vocab().at(b));
      for (size_t k = 0; k < dim; ++k) {
        ra[k] = normal(rng);
        rb[k] = ra[k] + offset[k];
      }
    }
  }
  return f;
}

/// Open questions a:b::c:d for both orders within each relation.
inline AnalogyDataset planted_open(const PlantedFixture& f) {
  AnalogyDataset ds;
  ds.name = "planted";
  for (size_t r = 0; r < f.relations.size(); ++r) {
    const auto& p = f.relations[r];
    for (int i = 0; i < 2; ++i) {
      const auto& s = p[i];
      const auto& t = p[1 - i];
      ds.open.push_back({s.first, s.second, t.first, t.second,
                         "rel" + std::to_string(r)});
    }
  }
  return ds;
}

/// Choice questions: stem from one relation, gold from the same relation,
/// four distractors from other relations, gold at a random position.
inline AnalogyDataset planted_choice(const PlantedFixture& f, size_t n,
                                     uint64_t seed) {
  std::mt19937_64 rng(seed);
  AnalogyDataset ds;
  ds.name = "planted-choice";
  const size_t nr = f.relations.size();
  for (size_t q = 0; q < n; ++q) {
    const size_t r = pick(rng, nr);
    const size_t i = pick(rng, 2);
    ChoiceQuestion cq;
    cq.a = f.relations[r][i].first;
    cq.b = f.relations[r][i].second;
    std::vector<std::pair<std::string, std::string>> distract;
    for (size_t o = 0; o < nr; ++o) {
      if (o != r) distract.push_back(f.relations[o][pick(rng, 2)]);
    }
    cq.gold = pick(rng, 5);
    size_t next = 0;
    for (size_t k = 0; k < 5; ++k) {
      cq.candidates.push_back(k == cq.gold ? f.relations[r][1 - i]
                                           : distract[next++]);
    }
    ds.choice.push_back(std::move(cq));
  }
  return ds;
}

inline double max_abs_diff(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.data().size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

}  // namespace relemb::testing

#endif  // RELEMB_TESTS_SUPPORT_FIXTURES_H_
