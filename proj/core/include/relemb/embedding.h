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

#ifndef RELEMB_EMBEDDING_H_
#define RELEMB_EMBEDDING_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "relemb/vocabulary.h"

namespace relemb {

/// Dense row-major word vectors; row i belongs to vocabulary id i.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(Vocabulary vocab, size_t dim);

  /// i.i.d. N(0, 1) entries from a 64-bit Mersenne twister seeded with
  /// `seed`. Throws UsageError when dim is 0.
  static EmbeddingMatrix random(Vocabulary vocab, size_t dim, uint64_t seed);

  size_t rows() const { return vocab_.size(); }
  size_t dim() const { return dim_; }
  const Vocabulary& vocab() const { return vocab_; }

  std::span<double> row(WordId w) {
    return std::span<double>(data_).subspan(static_cast<size_t>(w) * dim_, dim_);
  }
  std::span<const double> row(WordId w) const {
    return std::span<const double>(data_).subspan(static_cast<size_t>(w) * dim_,
                                                  dim_);
  }
  std::span<const double> data() const { return data_; }

  /// Multiplies every entry by c.
  void scale(double c);

  /// Index of the first non-finite entry, or -1 when all are finite.
  long long first_non_finite() const;
  /// Throws DivergenceError naming the word when a NaN/Inf is present.
  void check_finite(const char* where) const;

  /// Binary format: magic, rows, dim, words, raw doubles. Bit-exact.
  void save_binary(const std::filesystem::path& path) const;
  static EmbeddingMatrix load_binary(const std::filesystem::path& path);

  /// GloVe text format, one `word v1 ... vd` line per row.
  void save_text(const std::filesystem::path& path) const;
  /// Reads the GloVe text format; a leading word2vec-style "rows dim"
  /// header line is accepted and skipped.
  static EmbeddingMatrix load_text(const std::filesystem::path& path);

  /// Dispatches on the binary magic.
  static EmbeddingMatrix load(const std::filesystem::path& path);

  bool operator==(const EmbeddingMatrix& o) const {
    return dim_ == o.dim_ && vocab_ == o.vocab_ && data_ == o.data_;
  }

 private:
  Vocabulary vocab_;
  size_t dim_ = 0;
  std::vector<double> data_;
};

struct PretrainedLoad {
  EmbeddingMatrix matrix;
  size_t found = 0;
  double coverage = 0.0;  // found / vocab size
};

/// Initializes rows of `vocab` from a GloVe text file. Words missing from
/// the file keep the seeded random row they would get from
/// EmbeddingMatrix::random(vocab, dim, seed). The dimension is taken from
/// the file. Throws DataError on inconsistent line widths.
PretrainedLoad load_pretrained(const std::filesystem::path& path,
                               const Vocabulary& vocab, uint64_t seed);

}  // namespace relemb

#endif  // RELEMB_EMBEDDING_H_
