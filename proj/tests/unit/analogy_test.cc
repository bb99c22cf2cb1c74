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
#include <fstream>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "relemb/analogy.h"
#include "relemb/error.h"
#include "support/fixtures.h"

namespace relemb {
namespace {

using V = std::vector<double>;

double ref_cos(const V& x, const V& y) {
  double d = 0, nx = 0, ny = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    d += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  return (nx == 0 || ny == 0) ? 0.0 : d / std::sqrt(nx * ny);
}

V sub(const V& x, const V& y) {
  V r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

V rand_vec(std::mt19937_64& rng, size_t n, double sd = 1.0) {
  std::normal_distribution<double> g(0.0, sd);
  V v(n);
  for (double& x : v) x = g(rng);
  return v;
}

TEST(Measures, CosMultExample) {
  const V a = {0, 1}, b = {1, 0}, c = {1, 0}, d = {1, 0};
  EXPECT_NEAR(cos_mult(a, b, c, d).value, 1.99996, 1e-5);
  EXPECT_EQ(cos_mult(a, V{-1, 0}, c, d).value, 0.0);
}

TEST(Measures, AgreeWithReferenceFormulas) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    const size_t n = 1 + testing::pick(rng, 10);
    const V a = rand_vec(rng, n), b = rand_vec(rng, n), c = rand_vec(rng, n),
            d = rand_vec(rng, n);
    V bac(n);
    for (size_t k = 0; k < n; ++k) bac[k] = b[k] - a[k] + c[k];
    EXPECT_NEAR(cos_add(a, b, c, d).value, ref_cos(bac, d), 1e-12);
    const auto pos = [](double x) { return (x + 1) / 2; };
    EXPECT_NEAR(cos_mult(a, b, c, d).value,
                pos(ref_cos(b, d)) * pos(ref_cos(c, d)) / (pos(ref_cos(a, d)) + 1e-5),
                1e-9);
    EXPECT_NEAR(pair_diff(a, b, c, d).value, ref_cos(sub(b, a), sub(d, c)), 1e-12);
  }
}

TEST(Measures, FiniteOnDegenerateInputs) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = 1 + testing::pick(rng, 5);
    auto maybe_zero = [&] { return testing::pick(rng, 3) == 0 ? V(n, 0.0) : rand_vec(rng, n); };
    const V a = maybe_zero(), b = maybe_zero(), c = maybe_zero(), d = maybe_zero();
    for (Measure m : {Measure::kCosAdd, Measure::kCosMult, Measure::kPairDiff}) {
      EXPECT_TRUE(std::isfinite(score(m, a, b, c, d).value));
    }
  }
  const V z(3, 0.0), x = {1, 2, 3};
  EXPECT_TRUE(pair_diff(x, x, z, x).degenerate);
  EXPECT_EQ(pair_diff(x, x, z, x).value, 0.0);
}

TEST(Measures, PairDiffSymmetryAndTranslation) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const V a = rand_vec(rng, 6), b = rand_vec(rng, 6), c = rand_vec(rng, 6),
            d = rand_vec(rng, 6), t = rand_vec(rng, 6, 5.0);
    const double s = pair_diff(a, b, c, d).value;
    EXPECT_NEAR(s, pair_diff(c, d, a, b).value, 1e-12);
    V at(6), bt(6), ct(6), dt(6);
    for (size_t k = 0; k < 6; ++k) {
      at[k] = a[k] + t[k];
      bt[k] = b[k] + t[k];
      ct[k] = c[k] + t[k];
      dt[k] = d[k] + t[k];
    }
    EXPECT_NEAR(s, pair_diff(at, bt, ct, dt).value, 1e-9);
  }
}

EmbeddingMatrix royal() {
  EmbeddingMatrix e(Vocabulary({"man", "woman", "king", "queen", "apple"}), 3);
  const std::vector<V> rows = {{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}, {0, 0, -1}};
  for (WordId w = 0; w < 5; ++w) std::copy(rows[w].begin(), rows[w].end(), e.row(w).begin());
  return e;
}

TEST(OpenVocab, QueenExample) {
  const auto e = royal();
  for (Measure m : {Measure::kCosAdd, Measure::kCosMult}) {
    const auto r = solve_open_vocab({"man", "woman", "king", "queen", ""}, e, m);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->size(), 2u);  // M - 3 candidates
    EXPECT_EQ(e.vocab().word(r->front().word), "queen");
  }
  EXPECT_FALSE(solve_open_vocab({"man", "woman", "prince", "", ""}, e,
                                Measure::kCosAdd).has_value());
}

TEST(OpenVocab, RankingMatchesBruteForce) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto e = EmbeddingMatrix::random(
        Vocabulary({"a", "b", "c", "d", "e", "f", "g", "h"}), 4, trial);
    const OpenQuestion q{"a", "b", "c", "d", ""};
    for (Measure m : {Measure::kCosAdd, Measure::kCosMult, Measure::kPairDiff}) {
      const auto r = *solve_open_vocab(q, e, m);
      std::vector<std::pair<double, WordId>> want;
      auto vec = [&](WordId w) { return V(e.row(w).begin(), e.row(w).end()); };
      for (WordId w = 3; w < 8; ++w) {
        double s = 0;
        const V a = vec(0), b = vec(1), c = vec(2), d = vec(w);
        if (m == Measure::kPairDiff) {
          s = ref_cos(sub(b, a), sub(d, c));
        } else if (m == Measure::kCosAdd) {
          V t(4);
          for (size_t k = 0; k < 4; ++k) t[k] = b[k] - a[k] + c[k];
          s = ref_cos(t, d);
        } else {
          auto pos = [](double x) { return (x + 1) / 2; };
          s = pos(ref_cos(b, d)) * pos(ref_cos(c, d)) / (pos(ref_cos(a, d)) + 1e-5);
        }
        want.push_back({s, w});
      }
      std::sort(want.begin(), want.end(), [](auto& x, auto& y) {
        return x.first != y.first ? x.first > y.first : x.second < y.second;
      });
      ASSERT_EQ(r.size(), want.size());
      for (size_t i = 0; i < r.size(); ++i) {
        EXPECT_EQ(r[i].word, want[i].second);
        EXPECT_NEAR(r[i].score, want[i].first, 1e-9);
      }
    }
  }
}

TEST(Planted, OffsetsSolvedExactly) {
  const auto f = testing::planted_offsets();
  const auto open = testing::planted_open(f);
  for (Measure m : {Measure::kCosAdd, Measure::kCosMult}) {
    const auto r = evaluate(open, f.embeddings, m);
    EXPECT_EQ(r.correct, r.total) << measure_name(m);
  }
  const auto choice = testing::planted_choice(f, 100, 5);
  EXPECT_EQ(evaluate(choice, f.embeddings, Measure::kPairDiff).correct, 100u);
}

TEST(Choice, TiesGoToLowerIndex) {
  const auto e = royal();
  ChoiceQuestion q{"man", "woman", {{"king", "queen"}, {"king", "queen"}}, 1};
  const auto a = solve_multiple_choice(q, e, Measure::kPairDiff);
  EXPECT_EQ(a.chosen, 0u);
  EXPECT_FALSE(a.flagged);
}

TEST(Choice, OutOfVocabularyCandidatesAndStems) {
  const auto e = royal();
  ChoiceQuestion q{"man", "woman", {{"king", "zebra"}, {"man", "apple"}}, 1};
  const auto a = solve_multiple_choice(q, e, Measure::kCosAdd);
  EXPECT_TRUE(std::isinf(a.scores[0]));
  EXPECT_EQ(a.chosen, 1u);
  const auto b = solve_multiple_choice({"yeti", "woman", q.candidates, 0}, e,
                                       Measure::kCosAdd);
  EXPECT_TRUE(b.flagged);
  EXPECT_THROW(solve_multiple_choice({"man", "woman", {{"king", "queen"}}, 0}, e,
                                     Measure::kCosAdd),
               DataError);
  AnalogyDataset ds;
  ds.choice = {q};
  const auto r = evaluate(ds, e, Measure::kCosAdd);
  EXPECT_EQ(r.flagged, 1u);
  EXPECT_EQ(r.total, 1u);
}

TEST(Datasets, GoogleFormatSections) {
  const auto dir = testing::temp_dir("google");
  {
    std::ofstream f(dir / "q.txt");
    f << ": capital-common\nMan Woman King Queen\n: gram1-adj\nman woman king queen\n"
         "man woman king apple\n";
  }
  const auto ds = load_google(dir / "q.txt");
  ASSERT_EQ(ds.open.size(), 3u);
  EXPECT_EQ(ds.open[0].a, "man");
  EXPECT_EQ(ds.open[1].section, "gram1-adj");
  const auto r = evaluate(ds, royal(), Measure::kCosAdd);
  ASSERT_EQ(r.categories.size(), 2u);
  EXPECT_EQ(r.categories[0].name, "semantic");
  EXPECT_EQ(r.categories[0].correct, 1u);
  EXPECT_EQ(r.categories[1].total, 2u);
  EXPECT_EQ(r.categories[1].correct, 1u);
  EXPECT_EQ(r.correct, 2u);
  EXPECT_NEAR(r.accuracy, 2.0 / 3.0, 1e-15);
  {
    std::ofstream f(dir / "bad.txt");
    f << "a b c\n";
  }
  EXPECT_THROW(load_google(dir / "bad.txt"), DataError);
}

TEST(Datasets, ChoiceTsv) {
  const auto dir = testing::temp_dir("choice");
  {
    std::ofstream f(dir / "c.tsv");
    f << "man\twoman\tking\tqueen\tapple\tking\t0\n";
  }
  const auto ds = load_choice_tsv(dir / "c.tsv");
  ASSERT_EQ(ds.choice.size(), 1u);
  EXPECT_EQ(ds.choice[0].candidates.size(), 2u);
  EXPECT_EQ(ds.choice[0].gold, 0u);
  {
    std::ofstream f(dir / "bad.tsv");
    f << "man\twoman\tking\tqueen\tapple\tking\t2\n";
  }
  EXPECT_THROW(load_choice_tsv(dir / "bad.tsv"), DataError);
}

TEST(Reports, JsonlRoundTripAndRecount) {
  const auto f = testing::planted_offsets();
  std::vector<EvaluationReport> reports;
  for (Measure m : {Measure::kCosAdd, Measure::kPairDiff}) {
    reports.push_back(evaluate(testing::planted_open(f), f.embeddings, m));
  }
  for (const auto& r : reports) {
    size_t sum = 0;
    for (const auto& s : r.sections) sum += s.correct;
    EXPECT_EQ(sum, r.correct);
  }
  std::stringstream ss;
  write_report_jsonl(ss, reports);
  const auto back = read_report_jsonl(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].measure, "pairdiff");
  EXPECT_EQ(back[0].correct, reports[0].correct);
  EXPECT_EQ(back[0].sections.size(), reports[0].sections.size());
  std::istringstream bad("{\"dataset\": 1}\n");
  EXPECT_THROW(read_report_jsonl(bad), DataError);
}

TEST(Measures, ParseNames) {
  EXPECT_EQ(parse_measure("CosMult"), Measure::kCosMult);
  EXPECT_THROW(parse_measure("cos3"), UsageError);
}

}  // namespace
}  // namespace relemb
