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

#include "relemb/association.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "relemb/error.h"
#include "relemb/io.h"

namespace relemb {
namespace {
constexpr char kStoreMagic[] = "RELEMBS1";
}  // namespace

AssociationStore AssociationStore::compute_ppmi(const CorpusCounts& counts) {
  if (counts.counts.empty()) {
    throw DataError("cannot compute PPMI: no pattern co-occurrence counts");
  }
  AssociationStore store;
  store.vocab_ = counts.vocab;
  store.patterns_ = Vocabulary(counts.patterns);
  store.pairs_.reserve(counts.pairs.size());
  for (const auto& p : counts.pairs) store.pairs_.push_back({p.u, p.v});

  store.pattern_marginal_.assign(store.patterns_.size(), 0);
  store.pair_marginal_.assign(store.pairs_.size(), 0);
  for (const auto& c : counts.counts) {
    store.pattern_marginal_.at(c.pattern) += c.count;
    store.pair_marginal_.at(c.pair) += c.count;
    store.total_ += c.count;
  }

  store.support_.assign(store.patterns_.size(), {});
  const auto total = static_cast<double>(store.total_);
  for (const auto& c : counts.counts) {
    if (c.count == 0) continue;
    const double ratio =
        static_cast<double>(c.count) * total /
        (static_cast<double>(store.pattern_marginal_[c.pattern]) *
         static_cast<double>(store.pair_marginal_[c.pair]));
    const double f = std::max(0.0, std::log(ratio));
    if (f > 0.0) store.support_[c.pattern].push_back({c.pair, f});
  }
  store.finalize();
  return store;
}

void AssociationStore::finalize() {
  norms_.assign(patterns_.size(), 0.0);
  word_patterns_.assign(vocab_.size(), {});
  for (PatternId p = 0; p < support_.size(); ++p) {
    auto& sup = support_[p];
    std::sort(sup.begin(), sup.end(),
              [](const auto& a, const auto& b) { return a.pair < b.pair; });
    double sum = 0.0;
    for (const auto& e : sup) {
      sum += e.f;
      const WordPair& wp = pairs_[e.pair];
      word_patterns_[wp.u].push_back(p);
      word_patterns_[wp.v].push_back(p);
    }
    norms_[p] = sum;
  }
  for (auto& list : word_patterns_) {
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

void AssociationStore::check_pattern(PatternId p) const {
  if (p >= patterns_.size()) {
    throw DataError("unknown pattern id " + std::to_string(p) + " (store has " +
                    std::to_string(patterns_.size()) + " patterns)");
  }
}

const std::string& AssociationStore::pattern_name(PatternId p) const {
  check_pattern(p);
  return patterns_.word(p);
}

std::optional<PatternId> AssociationStore::find_pattern(
    std::string_view name) const {
  return patterns_.find(name);
}

std::span<const SupportEntry> AssociationStore::support(PatternId p) const {
  check_pattern(p);
  return support_[p];
}

double AssociationStore::norm(PatternId p) const {
  check_pattern(p);
  return norms_[p];
}

std::optional<double> AssociationStore::score(PatternId p, PairId pair) const {
  const auto sup = support(p);
  auto it = std::lower_bound(
      sup.begin(), sup.end(), pair,
      [](const SupportEntry& e, PairId id) { return e.pair < id; });
  if (it == sup.end() || it->pair != pair) return std::nullopt;
  return it->f;
}

size_t AssociationStore::entry_count() const {
  size_t n = 0;
  for (const auto& s : support_) n += s.size();
  return n;
}

std::span<const PatternId> AssociationStore::patterns_of_word(WordId w) const {
  return word_patterns_.at(w);
}

void AssociationStore::save(const std::filesystem::path& path) const {
  io::write_atomically(path, [&](std::ostream& out) {
    io::BinaryWriter w(out);
    w.magic(kStoreMagic);
    w.u64(vocab_.size());
    w.u64(patterns_.size());
    w.u64(pairs_.size());
    w.u64(entry_count());
    w.u64(total_);
    for (const auto& word : vocab_.words()) w.str(word);
    for (PatternId p = 0; p < patterns_.size(); ++p) {
      w.str(patterns_.word(p));
      w.u64(pattern_marginal_[p]);
    }
    for (PairId i = 0; i < pairs_.size(); ++i) {
      w.u32(pairs_[i].u);
      w.u32(pairs_[i].v);
      w.u64(pair_marginal_[i]);
    }
    for (PatternId p = 0; p < support_.size(); ++p) {
      for (const auto& e : support_[p]) {
        w.u32(p);
        w.u32(e.pair);
        w.f64(e.f);
      }
    }
  });
}

AssociationStore AssociationStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open store " + path.string());
  io::BinaryReader r(in, path.string());
  r.expect_magic(kStoreMagic);
  AssociationStore store;
  const uint64_t n_words = r.u64();
  const uint64_t n_patterns = r.u64();
  const uint64_t n_pairs = r.u64();
  const uint64_t n_entries = r.u64();
  store.total_ = r.u64();
  std::vector<std::string> words(n_words);
  for (auto& w : words) w = r.str();
  store.vocab_ = Vocabulary(std::move(words));
  std::vector<std::string> names(n_patterns);
  store.pattern_marginal_.resize(n_patterns);
  for (uint64_t p = 0; p < n_patterns; ++p) {
    names[p] = r.str();
    store.pattern_marginal_[p] = r.u64();
  }
  store.patterns_ = Vocabulary(std::move(names));
  store.pairs_.resize(n_pairs);
  store.pair_marginal_.resize(n_pairs);
  for (uint64_t i = 0; i < n_pairs; ++i) {
    store.pairs_[i].u = r.u32();
    store.pairs_[i].v = r.u32();
    store.pair_marginal_[i] = r.u64();
    if (store.pairs_[i].u >= n_words || store.pairs_[i].v >= n_words) {
      throw DataError(path.string() + ": pair word id out of range");
    }
  }
  store.support_.assign(n_patterns, {});
  for (uint64_t i = 0; i < n_entries; ++i) {
    const uint32_t p = r.u32();
    const uint32_t pair = r.u32();
    const double f = r.f64();
    if (p >= n_patterns || pair >= n_pairs || !(f > 0.0)) {
      throw DataError(path.string() + ": invalid triple record");
    }
    store.support_[p].push_back({pair, f});
  }
  r.expect_eof();
  store.finalize();
  return store;
}

void AssociationStore::export_tsv(const std::filesystem::path& path) const {
  io::write_atomically(
      path,
      [&](std::ostream& out) {
        for (PatternId p = 0; p < support_.size(); ++p) {
          for (const auto& e : support_[p]) {
            out << patterns_.word(p) << '\t' << vocab_.word(pairs_[e.pair].u) << '\t'
                << vocab_.word(pairs_[e.pair].v) << '\t'
                << io::format_double(e.f) << '\n';
          }
        }
      },
      false);
}

}  // namespace relemb
