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

#include "relemb/embedding.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <optional>
#include <random>
#include <string>

#include "relemb/error.h"
#include "relemb/io.h"

namespace relemb {
namespace {

constexpr char kEmbeddingMagic[] = "RELEMBE1";

struct TextRow {
  std::string word;
  std::vector<double> values;
};

// Parses one GloVe line; returns nullopt for blank lines.
std::optional<TextRow> parse_text_row(const std::string& line,
                                      const std::string& ctx) {
  const auto fields = io::split_ws(line);
  if (fields.empty()) return std::nullopt;
  TextRow row;
  row.word = std::string(fields[0]);
  row.values.reserve(fields.size() - 1);
  for (size_t i = 1; i < fields.size(); ++i) {
    row.values.push_back(io::parse_double(fields[i], ctx));
  }
  return row;
}

bool is_word2vec_header(const std::string& line) {
  const auto f = io::split_ws(line);
  if (f.size() != 2) return false;
  for (auto s : f) {
    for (char c : s) {
      if (c < '0' || c > '9') return false;
    }
  }
  return true;
}

// Calls fn(row) for each vector line, enforcing one dimension throughout.
template <typename Fn>
size_t read_text_rows(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embeddings " + path.string());
  std::string line;
  size_t lineno = 0;
  size_t dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && is_word2vec_header(line)) continue;
    const std::string ctx = path.string() + ":" + std::to_string(lineno);
    auto row = parse_text_row(line, ctx);
    if (!row) continue;
    if (row->values.empty()) throw DataError(ctx + ": word without a vector");
    if (dim == 0) {
      dim = row->values.size();
    } else if (row->values.size() != dim) {
      throw DataError(ctx + ": dimension " + std::to_string(row->values.size()) +
                      " differs from " + std::to_string(dim));
    }
    fn(std::move(*row));
  }
  if (in.bad()) throw DataError("read error on " + path.string());
  return dim;
}

}  // namespace

EmbeddingMatrix::EmbeddingMatrix(Vocabulary vocab, size_t dim)
    : vocab_(std::move(vocab)), dim_(dim), data_(vocab_.size() * dim, 0.0) {
  if (dim == 0) throw UsageError("embedding dimension must be >= 1");
}

EmbeddingMatrix EmbeddingMatrix::random(Vocabulary vocab, size_t dim,
                                        uint64_t seed) {
  EmbeddingMatrix m(std::move(vocab), dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& x : m.data_) x = normal(rng);
  return m;
}

void EmbeddingMatrix::scale(double c) {
  for (double& x : data_) x *= c;
}

long long EmbeddingMatrix::first_non_finite() const {
  for (size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) return static_cast<long long>(i);
  }
  return -1;
}

void EmbeddingMatrix::check_finite(const char* where) const {
  const long long bad = first_non_finite();
  if (bad >= 0) {
    const auto w = static_cast<WordId>(static_cast<size_t>(bad) / dim_);
    throw DivergenceError(std::string(where) + ": non-finite value in vector of '" +
                          vocab_.word(w) + "'");
  }
}

void EmbeddingMatrix::save_binary(const std::filesystem::path& path) const {
  io::write_atomically(path, [&](std::ostream& out) {
    io::BinaryWriter w(out);
    w.magic(kEmbeddingMagic);
    w.u64(rows());
    w.u64(dim_);
    for (const auto& word : vocab_.words()) w.str(word);
    for (double x : data_) w.f64(x);
  });
}

EmbeddingMatrix EmbeddingMatrix::load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embeddings " + path.string());
  io::BinaryReader r(in, path.string());
  r.expect_magic(kEmbeddingMagic);
  const uint64_t rows = r.u64();
  const uint64_t dim = r.u64();
  if (dim == 0) throw DataError(path.string() + ": zero dimension");
  std::vector<std::string> words(rows);
  for (auto& w : words) w = r.str();
  EmbeddingMatrix m(Vocabulary(std::move(words)), dim);
  for (double& x : m.data_) x = r.f64();
  r.expect_eof();
  return m;
}

void EmbeddingMatrix::save_text(const std::filesystem::path& path) const {
  io::write_atomically(
      path,
      [&](std::ostream& out) {
        for (WordId w = 0; w < rows(); ++w) {
          out << vocab_.word(w);
          for (double x : row(w)) out << ' ' << io::format_double(x);
          out << '\n';
        }
      },
      false);
}

EmbeddingMatrix EmbeddingMatrix::load_text(const std::filesystem::path& path) {
  std::vector<std::string> words;
  std::vector<double> data;
  const size_t dim = read_text_rows(path, [&](TextRow row) {
    words.push_back(std::move(row.word));
    data.insert(data.end(), row.values.begin(), row.values.end());
  });
  if (words.empty()) throw DataError(path.string() + ": no vectors");
  EmbeddingMatrix m(Vocabulary(std::move(words)), dim);
  m.data_ = std::move(data);
  return m;
}

EmbeddingMatrix EmbeddingMatrix::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embeddings " + path.string());
  char magic[sizeof kEmbeddingMagic - 1] = {};
  in.read(magic, sizeof magic);
  const bool binary = in.gcount() == static_cast<std::streamsize>(sizeof magic) &&
                      std::memcmp(magic, kEmbeddingMagic, sizeof magic) == 0;
  in.close();
  return binary ? load_binary(path) : load_text(path);
}

PretrainedLoad load_pretrained(const std::filesystem::path& path,
                               const Vocabulary& vocab, uint64_t seed) {
  std::vector<std::pair<WordId, std::vector<double>>> found;
  std::vector<uint8_t> seen(vocab.size(), 0);
  const size_t dim = read_text_rows(path, [&](TextRow row) {
    if (auto id = vocab.find(row.word); id && !seen[*id]) {
      seen[*id] = 1;
      found.emplace_back(*id, std::move(row.values));
    }
  });
  if (dim == 0) throw DataError(path.string() + ": no vectors");
  PretrainedLoad out;
  out.matrix = EmbeddingMatrix::random(vocab, dim, seed);
  for (auto& [id, values] : found) {
    std::copy(values.begin(), values.end(), out.matrix.row(id).begin());
  }
  out.found = found.size();
  out.coverage = vocab.empty() ? 0.0
                               : static_cast<double>(found.size()) /
                                     static_cast<double>(vocab.size());
  return out;
}

}  // namespace relemb
