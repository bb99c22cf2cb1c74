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

#include <cmath>
#include <random>
#include <stdexcept>

#include "gtest/gtest.h"
#include "relemb/association.h"
#include "relemb/error.h"
#include "support/fixtures.h"

namespace relemb {
namespace {

// Two patterns over three pairs: p0 sees (a,b) 4 times and (a,c) 6 times;
// p1 sees (a,b) 4 times and (b,c) 86 times. Total 100.
CorpusCounts small_counts() {
  CorpusCounts c;
  c.vocab = Vocabulary({"a", "b", "c"});
  c.pairs = {{0, 1, 50}, {0, 2, 50}, {1, 2, 50}};
  c.patterns = {"X p Y", "X q Y"};
  c.counts = {{0, 0, 4}, {0, 1, 6}, {1, 0, 4}, {1, 2, 86}};
  return c;
}

TEST(Ppmi, HandComputedValue) {
  const auto s = AssociationStore::compute_ppmi(small_counts());
  EXPECT_EQ(s.total_count(), 100u);
  EXPECT_EQ(s.pattern_marginal(0), 10u);
  EXPECT_EQ(s.pair_marginal(0), 8u);
  // 4 * 100 / (10 * 8) = 5
  EXPECT_NEAR(*s.score(0, 0), 1.6094, 1e-4);
  EXPECT_DOUBLE_EQ(*s.score(0, 0), std::log(5.0));
}

TEST(Ppmi, NegativeAssociationClampedAndOmitted) {
  const auto s = AssociationStore::compute_ppmi(small_counts());
  // p1 with (a,b): 4 * 100 / (90 * 8) < 1
  EXPECT_FALSE(s.score(1, 0).has_value());
  for (const auto& e : s.support(1)) EXPECT_NE(e.pair, 0u);
  // Unseen cells are absent too.
  EXPECT_FALSE(s.score(0, 2).has_value());
}

TEST(Ppmi, MatchesDenseOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t np = 1 + testing::pick(rng, 10), nq = 1 + testing::pick(rng, 10);
    const auto c = testing::random_counts(rng, np, nq);
    const auto s = AssociationStore::compute_ppmi(c);
    const auto g = testing::dense_counts(c);
    uint64_t total = 0;
    std::vector<uint64_t> gp(np, 0), gq(nq, 0);
    for (size_t p = 0; p < np; ++p) {
      for (size_t q = 0; q < nq; ++q) {
        total += g[p][q];
        gp[p] += g[p][q];
        gq[q] += g[p][q];
      }
    }
    for (PatternId p = 0; p < np; ++p) {
      double norm = 0.0;
      for (PairId q = 0; q < nq; ++q) {
        const bool positive = g[p][q] > 0 && g[p][q] * total > gp[p] * gq[q];
        const auto got = s.score(p, q);
        ASSERT_EQ(got.has_value(), positive);
        if (positive) {
          const double want = std::log(double(g[p][q]) * double(total) /
                                       (double(gp[p]) * double(gq[q])));
          EXPECT_NEAR(*got, want, 1e-12);
          EXPECT_GT(*got, 0.0);
          norm += *got;
        }
      }
      EXPECT_NEAR(s.norm(p), norm, 1e-12);
    }
  }
}

TEST(Ppmi, SupportSortedAndIndexConsistent) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = AssociationStore::compute_ppmi(testing::random_counts(rng, 8, 12));
    size_t entries = 0;
    for (PatternId p = 0; p < s.pattern_count(); ++p) {
      const auto sup = s.support(p);
      entries += sup.size();
      for (size_t i = 1; i < sup.size(); ++i) EXPECT_LT(sup[i - 1].pair, sup[i].pair);
      for (const auto& e : sup) {
        const auto& wp = s.pair(e.pair);
        for (WordId w : {wp.u, wp.v}) {
          const auto pats = s.patterns_of_word(w);
          EXPECT_TRUE(std::binary_search(pats.begin(), pats.end(), p));
        }
      }
    }
    EXPECT_EQ(entries, s.entry_count());
  }
}

TEST(Ppmi, MonotoneWithMarginalsFixed) {
  // Moving mass around a 2x2 cycle raises g(p,q) while every marginal and
  // the total stay put, so f(p,q) cannot fall.
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    auto c = testing::random_counts(rng, 4, 5, 1.0);
    const auto p = static_cast<PatternId>(testing::pick(rng, 4));
    const auto q = static_cast<PairId>(testing::pick(rng, 5));
    const auto p2 = static_cast<PatternId>((p + 1 + testing::pick(rng, 3)) % 4);
    const auto q2 = static_cast<PairId>((q + 1 + testing::pick(rng, 4)) % 5);
    auto cell = [&](PatternId a, PairId b) -> uint64_t& {
      for (auto& e : c.counts) {
        if (e.pattern == a && e.pair == b) return e.count;
      }
      throw std::logic_error("dense counts expected");
    };
    const uint64_t delta = std::min(cell(p, q2), cell(p2, q));
    const auto before = AssociationStore::compute_ppmi(c);
    cell(p, q) += delta;
    cell(p2, q2) += delta;
    cell(p, q2) -= delta;
    cell(p2, q) -= delta;
    std::erase_if(c.counts, [](const auto& e) { return e.count == 0; });
    const auto after = AssociationStore::compute_ppmi(c);
    EXPECT_EQ(after.pattern_marginal(p), before.pattern_marginal(p));
    EXPECT_EQ(after.pair_marginal(q), before.pair_marginal(q));
    EXPECT_GE(after.score(p, q).value_or(0.0), before.score(p, q).value_or(0.0));
  }
}

TEST(Ppmi, InvariantUnderUniformCountScaling) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = testing::random_counts(rng, 6, 6);
    const auto before = AssociationStore::compute_ppmi(c);
    const uint64_t k = 2 + testing::pick(rng, 50);
    for (auto& e : c.counts) e.count *= k;
    const auto after = AssociationStore::compute_ppmi(c);
    for (PatternId p = 0; p < 6; ++p) {
      for (PairId q = 0; q < 6; ++q) {
        EXPECT_NEAR(after.score(p, q).value_or(0.0), before.score(p, q).value_or(0.0),
                    1e-12);
      }
    }
  }
}

TEST(Ppmi, UnknownPatternThrows) {
  const auto s = AssociationStore::compute_ppmi(small_counts());
  EXPECT_THROW(s.support(7), DataError);
  EXPECT_THROW(s.norm(2), DataError);
  EXPECT_FALSE(s.find_pattern("X zz Y").has_value());
  EXPECT_EQ(s.find_pattern("X q Y"), PatternId{1});
}

TEST(Ppmi, EmptyCountsRejected) {
  CorpusCounts c = small_counts();
  c.counts.clear();
  EXPECT_THROW(AssociationStore::compute_ppmi(c), DataError);
}

TEST(Ppmi, SaveLoadPreservesEverything) {
  std::mt19937_64 rng(30);
  const auto dir = testing::temp_dir("store");
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = AssociationStore::compute_ppmi(testing::random_counts(rng, 9, 11));
    s.save(dir / "store.bin");
    const auto t = AssociationStore::load(dir / "store.bin");
    ASSERT_EQ(t.pattern_count(), s.pattern_count());
    ASSERT_EQ(t.pair_count(), s.pair_count());
    EXPECT_EQ(t.total_count(), s.total_count());
    for (PatternId p = 0; p < s.pattern_count(); ++p) {
      EXPECT_EQ(t.pattern_name(p), s.pattern_name(p));
      const auto a = s.support(p), b = t.support(p);
      ASSERT_EQ(a.size(), b.size());
      for (size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].pair, b[i].pair);
        EXPECT_EQ(a[i].f, b[i].f);
      }
      EXPECT_EQ(t.norm(p), s.norm(p));
    }
  }
  EXPECT_THROW(AssociationStore::load(dir / "absent.bin"), DataError);
}

}  // namespace
}  // namespace relemb
