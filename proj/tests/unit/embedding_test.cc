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

#include "gtest/gtest.h"
#include "relemb/embedding.h"
#include "relemb/error.h"
#include "support/fixtures.h"

namespace relemb {
namespace {

Vocabulary words(size_t n) {
  std::vector<std::string> w;
  for (size_t i = 0; i < n; ++i) w.push_back("w" + std::to_string(i));
  return Vocabulary(w);
}

TEST(Embedding, RandomInitIsStandardNormal) {
  const auto e = EmbeddingMatrix::random(words(1000), 300, 42);
  double sum = 0.0, sq = 0.0;
  for (double x : e.data()) sum += x;
  const double mean = sum / e.data().size();
  for (double x : e.data()) sq += (x - mean) * (x - mean);
  const double var = sq / (e.data().size() - 1);
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(Embedding, SeedDeterminesMatrix) {
  EXPECT_EQ(EmbeddingMatrix::random(words(20), 8, 1),
            EmbeddingMatrix::random(words(20), 8, 1));
  EXPECT_FALSE(EmbeddingMatrix::random(words(20), 8, 1) ==
               EmbeddingMatrix::random(words(20), 8, 2));
}

TEST(Embedding, ZeroDimensionRejected) {
  EXPECT_THROW(EmbeddingMatrix::random(words(3), 0, 1), UsageError);
}

TEST(Embedding, NonFiniteDetected) {
  auto e = EmbeddingMatrix::random(words(4), 3, 1);
  EXPECT_EQ(e.first_non_finite(), -1);
  e.row(2)[1] = std::nan("");
  EXPECT_EQ(e.first_non_finite(), 7);
  EXPECT_THROW(e.check_finite("test"), DivergenceError);
}

TEST(Embedding, BinaryIsBitExactAndTextIsClose) {
  const auto dir = testing::temp_dir("emb");
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    auto e = EmbeddingMatrix::random(words(1 + testing::pick(rng, 30)),
                                     1 + testing::pick(rng, 12), trial);
    e.scale(std::pow(10.0, static_cast<double>(testing::pick(rng, 9)) - 4.0));
    e.save_binary(dir / "e.bin");
    EXPECT_EQ(EmbeddingMatrix::load(dir / "e.bin"), e);
    e.save_text(dir / "e.txt");
    const auto t = EmbeddingMatrix::load(dir / "e.txt");
    ASSERT_EQ(t.vocab(), e.vocab());
    ASSERT_EQ(t.dim(), e.dim());
    EXPECT_LE(testing::max_abs_diff(t, e), 1e-6);
  }
}

TEST(Embedding, TruncatedBinaryRejected) {
  const auto dir = testing::temp_dir("emb_trunc");
  EmbeddingMatrix::random(words(10), 4, 1).save_binary(dir / "e.bin");
  std::filesystem::resize_file(dir / "e.bin",
                               std::filesystem::file_size(dir / "e.bin") - 5);
  EXPECT_THROW(EmbeddingMatrix::load_binary(dir / "e.bin"), DataError);
}

TEST(Embedding, TextWithHeaderLine) {
  const auto dir = testing::temp_dir("emb_hdr");
  {
    std::ofstream f(dir / "v.txt");
    f << "2 3\nw0 1 2 3\nw1 4 5 6\n";
  }
  const auto e = EmbeddingMatrix::load_text(dir / "v.txt");
  EXPECT_EQ(e.rows(), 2u);
  EXPECT_EQ(e.row(1)[2], 6.0);
}

TEST(Pretrained, CoverageAndFallbackRows) {
  const auto dir = testing::temp_dir("pre");
  {
    std::ofstream f(dir / "g.txt");
    f << "w1 0.5 0.25\nother 1 1\nw3 -1 2\n";
  }
  const auto vocab = words(4);
  const auto r = load_pretrained(dir / "g.txt", vocab, 9);
  EXPECT_EQ(r.found, 2u);
  EXPECT_DOUBLE_EQ(r.coverage, 0.5);
  EXPECT_EQ(r.matrix.dim(), 2u);
  EXPECT_EQ(r.matrix.row(1)[0], 0.5);
  EXPECT_EQ(r.matrix.row(3)[1], 2.0);
  const auto rnd = EmbeddingMatrix::random(vocab, 2, 9);
  EXPECT_EQ(r.matrix.row(0)[0], rnd.row(0)[0]);
  EXPECT_EQ(r.matrix.row(2)[1], rnd.row(2)[1]);
}

TEST(Pretrained, InconsistentWidthRejected) {
  const auto dir = testing::temp_dir("pre_bad");
  {
    std::ofstream f(dir / "g.txt");
    f << "w0 1 2 3\nw1 1 2\n";
  }
  EXPECT_THROW(load_pretrained(dir / "g.txt", words(2), 1), DataError);
}

}  // namespace
}  // namespace relemb
