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

#include "relemb/corpus.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "relemb/error.h"
#include "relemb/io.h"

namespace relemb {
namespace {

uint64_t pair_key(WordId u, WordId v) {
  return (static_cast<uint64_t>(u) << 32) | v;
}

// Runs fn(begin, end, shard) over `threads` contiguous sentence ranges.
template <typename Fn>
void for_shards(size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                                         std::max<size_t>(n, 1))));
  if (threads == 1) {
    fn(size_t{0}, n, 0u);
    return;
  }
  std::vector<std::thread> workers;
  const size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const size_t begin = std::min(n, t * chunk);
    const size_t end = std::min(n, begin + chunk);
    workers.emplace_back([&, begin, end, t] { fn(begin, end, t); });
  }
  for (auto& w : workers) w.join();
}

void check_window(int window) {
  if (window < 2) {
    throw UsageError("window must be >= 2, got " + std::to_string(window));
  }
}

std::string make_pattern(std::string_view first, std::string_view second = {}) {
  std::string p = "X ";
  p += first;
  if (!second.empty()) {
    p += '_';
    p += second;
  }
  p += " Y";
  return p;
}

}  // namespace

EncodedCorpus EncodedCorpus::read(std::istream& in, TokenizeStats* stats) {
  EncodedCorpus corpus;
  SentenceReader reader(in);
  Sentence s;
  while (reader.next(s)) corpus.add_sentence(s);
  if (stats) *stats = reader.stats();
  return corpus;
}

EncodedCorpus EncodedCorpus::read_file(const std::filesystem::path& path,
                                       TokenizeStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus " + path.string());
  return read(in, stats);
}

EncodedCorpus EncodedCorpus::from_sentences(std::span<const Sentence> sentences) {
  EncodedCorpus corpus;
  for (const auto& s : sentences) corpus.add_sentence(s);
  return corpus;
}

void EncodedCorpus::add_sentence(const Sentence& sentence) {
  for (const auto& tok : sentence) tokens_.push_back(vocab_.add(tok));
  offsets_.push_back(tokens_.size());
}

StopWordSet default_stopwords() {
  return {"a",     "an",    "and",   "are",  "as",    "at",    "be",
          "been",  "but",   "by",    "for",  "from",  "had",   "has",
          "have",  "he",    "her",   "his",  "i",     "if",    "in",
          "into",  "is",    "it",    "its",  "no",    "not",   "of",
          "on",    "or",    "she",   "so",   "such",  "that",  "the",
          "their", "them",  "then",  "there", "these", "they", "this",
          "those", "to",    "was",   "we",   "were",  "which", "while",
          "who",   "will",  "with",  "would", "you"};
}

StopWordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stop-word list " + path.string());
  StopWordSet out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (auto tok : io::split_ws(line)) {
      std::string w(tok);
      std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
      });
      out.insert(std::move(w));
    }
  }
  return out;
}

std::vector<WordPairStats> extract_word_pairs(const EncodedCorpus& corpus,
                                              int window,
                                              uint64_t min_sentence_count,
                                              const StopWordSet& stopwords,
                                              unsigned threads) {
  check_window(window);
  const Vocabulary& vocab = corpus.vocab();
  std::vector<uint8_t> is_stop(vocab.size()), is_word(vocab.size());
  for (WordId w = 0; w < vocab.size(); ++w) {
    is_stop[w] = stopwords.contains(vocab.word(w));
    is_word[w] = is_word_token(vocab.word(w));
  }

  std::vector<std::unordered_map<uint64_t, uint64_t>> shards(
      std::max(1u, threads));
  for_shards(corpus.sentence_count(), threads,
             [&](size_t begin, size_t end, unsigned shard) {
               auto& counts = shards[shard];
               std::vector<uint64_t> seen;
               for (size_t s = begin; s < end; ++s) {
                 const auto toks = corpus.sentence(s);
                 seen.clear();
                 for (size_t i = 0; i < toks.size(); ++i) {
                   const WordId u = toks[i];
                   if (!is_word[u]) continue;
                   const size_t last =
                       std::min(toks.size() - 1, i + static_cast<size_t>(window));
                   for (size_t j = i + 1; j <= last; ++j) {
                     const WordId v = toks[j];
                     if (!is_word[v] || u == v || (is_stop[u] && is_stop[v])) {
                       continue;
                     }
                     seen.push_back(pair_key(u, v));
                   }
                 }
                 std::sort(seen.begin(), seen.end());
                 seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
                 for (uint64_t key : seen) ++counts[key];
               }
             });

  auto& merged = shards[0];
  for (size_t i = 1; i < shards.size(); ++i) {
    for (const auto& [key, n] : shards[i]) merged[key] += n;
  }
  std::vector<WordPairStats> out;
  for (const auto& [key, n] : merged) {
    if (n >= min_sentence_count) {
      out.push_back({static_cast<WordId>(key >> 32),
                     static_cast<WordId>(key & 0xffffffffu), n});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return pair_key(a.u, a.v) < pair_key(b.u, b.v);
  });
  return out;
}

PatternTable extract_patterns(const EncodedCorpus& corpus,
                              std::span<const WordPairStats> pairs, int window,
                              unsigned threads) {
  check_window(window);
  std::unordered_map<uint64_t, PairId> pair_index;
  pair_index.reserve(pairs.size());
  for (PairId i = 0; i < pairs.size(); ++i) {
    pair_index.emplace(pair_key(pairs[i].u, pairs[i].v), i);
  }
  const Vocabulary& vocab = corpus.vocab();

  struct Shard {
    std::unordered_map<std::string, uint32_t> names;
    std::vector<std::string> by_id;
    std::unordered_map<uint64_t, uint64_t> counts;  // (local pattern, pair)

    void emit(std::string pattern, PairId pair) {
      auto [it, inserted] =
          names.try_emplace(std::move(pattern), static_cast<uint32_t>(by_id.size()));
      if (inserted) by_id.push_back(it->first);
      ++counts[(static_cast<uint64_t>(it->second) << 32) | pair];
    }
  };
  std::vector<Shard> shards(std::max(1u, threads));

  for_shards(corpus.sentence_count(), threads,
             [&](size_t begin, size_t end, unsigned shard_id) {
               Shard& shard = shards[shard_id];
               for (size_t s = begin; s < end; ++s) {
                 const auto toks = corpus.sentence(s);
                 for (size_t i = 0; i < toks.size(); ++i) {
                   const size_t last =
                       std::min(toks.size() - 1, i + static_cast<size_t>(window));
                   // At least one midfix token.
                   for (size_t j = i + 2; j <= last; ++j) {
                     auto it = pair_index.find(pair_key(toks[i], toks[j]));
                     if (it == pair_index.end()) continue;
                     const PairId pair = it->second;
                     for (size_t k = i + 1; k < j; ++k) {
                       shard.emit(make_pattern(vocab.word(toks[k])), pair);
                       if (k + 1 < j) {
                         shard.emit(make_pattern(vocab.word(toks[k]),
                                                 vocab.word(toks[k + 1])),
                                    pair);
                       }
                     }
                   }
                 }
               }
             });

  // Global ids follow lexicographic pattern order so sharding cannot
  // change them.
  std::map<std::string, uint64_t> name_set;
  for (const auto& shard : shards) {
    for (const auto& name : shard.by_id) name_set.emplace(name, 0);
  }
  PatternTable table;
  table.patterns.reserve(name_set.size());
  for (auto& [name, id] : name_set) {
    id = table.patterns.size();
    table.patterns.push_back(name);
  }
  std::unordered_map<uint64_t, uint64_t> merged;
  for (const auto& shard : shards) {
    std::vector<uint64_t> remap(shard.by_id.size());
    for (size_t i = 0; i < shard.by_id.size(); ++i) {
      remap[i] = name_set.at(shard.by_id[i]);
    }
    for (const auto& [key, n] : shard.counts) {
      merged[(remap[key >> 32] << 32) | (key & 0xffffffffu)] += n;
    }
  }
  table.totals.assign(table.patterns.size(), 0);
  table.counts.reserve(merged.size());
  for (const auto& [key, n] : merged) {
    const auto p = static_cast<PatternId>(key >> 32);
    table.counts.push_back({p, static_cast<PairId>(key & 0xffffffffu), n});
    table.totals[p] += n;
  }
  std::sort(table.counts.begin(), table.counts.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.pattern, a.pair) < std::tie(b.pattern, b.pair);
            });
  return table;
}

std::vector<PatternId> select_top_patterns(std::span<const uint64_t> totals,
                                           std::span<const std::string> names,
                                           size_t k) {
  if (totals.size() != names.size()) {
    throw UsageError("select_top_patterns: totals/names size mismatch");
  }
  if (k > totals.size()) {
    throw DataError("requested top " + std::to_string(k) +
                    " patterns but only " + std::to_string(totals.size()) +
                    " distinct patterns were extracted");
  }
  std::vector<PatternId> order(totals.size());
  std::iota(order.begin(), order.end(), PatternId{0});
  auto better = [&](PatternId a, PatternId b) {
    if (totals[a] != totals[b]) return totals[a] > totals[b];
    return names[a] < names[b];
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<ptrdiff_t>(k),
                    order.end(), better);
  order.resize(k);
  return order;
}

std::vector<uint64_t> CorpusCounts::pattern_totals() const {
  std::vector<uint64_t> totals(patterns.size(), 0);
  for (const auto& c : counts) totals[c.pattern] += c.count;
  return totals;
}

namespace {

// Re-indexes words to the sorted set of pair words and patterns to rank
// order, then sorts pairs and counts. Both extract_counts and load_tsv
// funnel through here so the canonical form has a single definition.
CorpusCounts canonicalize(const std::vector<std::string>& words,
                          std::vector<WordPairStats> pairs,
                          const std::vector<std::string>& pattern_names,
                          const std::vector<PatternCount>& counts,
                          const std::vector<PatternId>& rank) {
  std::vector<WordId> used;
  for (const auto& p : pairs) {
    used.push_back(p.u);
    used.push_back(p.v);
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::vector<std::string> sorted_words;
  for (WordId w : used) sorted_words.push_back(words[w]);
  std::sort(sorted_words.begin(), sorted_words.end());

  CorpusCounts out;
  out.vocab = Vocabulary(sorted_words);
  std::unordered_map<WordId, WordId> word_map;
  for (WordId w : used) word_map[w] = out.vocab.at(words[w]);

  std::vector<PairId> order(pairs.size());
  std::iota(order.begin(), order.end(), PairId{0});
  for (auto& p : pairs) {
    p.u = word_map.at(p.u);
    p.v = word_map.at(p.v);
  }
  std::sort(order.begin(), order.end(), [&](PairId a, PairId b) {
    return pair_key(pairs[a].u, pairs[a].v) < pair_key(pairs[b].u, pairs[b].v);
  });
  std::vector<PairId> pair_map(pairs.size());
  for (PairId i = 0; i < order.size(); ++i) {
    pair_map[order[i]] = i;
    out.pairs.push_back(pairs[order[i]]);
  }

  std::unordered_map<PatternId, PatternId> pattern_map;
  for (PatternId r = 0; r < rank.size(); ++r) {
    pattern_map[rank[r]] = r;
    out.patterns.push_back(pattern_names[rank[r]]);
  }
  for (const auto& c : counts) {
    auto it = pattern_map.find(c.pattern);
    if (it == pattern_map.end()) continue;
    out.counts.push_back({it->second, pair_map[c.pair], c.count});
  }
  std::sort(out.counts.begin(), out.counts.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.pattern, a.pair) < std::tie(b.pattern, b.pair);
            });
  return out;
}

constexpr char kCountsMagic[] = "RELEMBC1";

}  // namespace

CorpusCounts extract_counts(const EncodedCorpus& corpus,
                            const CorpusOptions& options,
                            const StopWordSet& stopwords) {
  auto pairs = extract_word_pairs(corpus, options.window,
                                  options.min_sentence_count, stopwords,
                                  options.threads);
  PatternTable table =
      extract_patterns(corpus, pairs, options.window, options.threads);
  const auto rank =
      select_top_patterns(table.totals, table.patterns, options.top_patterns);
  return canonicalize(corpus.vocab().words(), std::move(pairs), table.patterns,
                      table.counts, rank);
}

void CorpusCounts::save_tsv(const std::filesystem::path& dir) const {
  io::write_atomically(
      dir / "pairs.tsv",
      [&](std::ostream& out) {
        for (const auto& p : pairs) {
          out << vocab.word(p.u) << '\t' << vocab.word(p.v) << '\t'
              << p.sentence_count << '\n';
        }
      },
      false);
  io::write_atomically(
      dir / "patterns.tsv",
      [&](std::ostream& out) {
        for (const auto& c : counts) {
          const auto& pr = pairs[c.pair];
          out << patterns[c.pattern] << '\t' << vocab.word(pr.u) << '\t'
              << vocab.word(pr.v) << '\t' << c.count << '\n';
        }
      },
      false);
}

CorpusCounts CorpusCounts::load_tsv(const std::filesystem::path& dir) {
  Vocabulary words;
  std::vector<WordPairStats> pairs;
  std::unordered_map<uint64_t, PairId> pair_index;
  {
    const auto path = dir / "pairs.tsv";
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto f = io::split(line, '\t');
      const std::string ctx = path.string() + ":" + std::to_string(lineno);
      if (f.size() != 3) throw DataError(ctx + ": expected 3 fields");
      WordPairStats p{words.add(f[0]), words.add(f[1]),
                      static_cast<uint64_t>(io::parse_int(f[2], ctx))};
      pair_index.emplace(pair_key(p.u, p.v), static_cast<PairId>(pairs.size()));
      pairs.push_back(p);
    }
  }
  Vocabulary pattern_names;
  std::vector<PatternCount> counts;
  {
    const auto path = dir / "patterns.tsv";
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto f = io::split(line, '\t');
      const std::string ctx = path.string() + ":" + std::to_string(lineno);
      if (f.size() != 4) throw DataError(ctx + ": expected 4 fields");
      const auto u = words.find(f[1]);
      const auto v = words.find(f[2]);
      auto it = (u && v) ? pair_index.find(pair_key(*u, *v)) : pair_index.end();
      if (it == pair_index.end()) {
        throw DataError(ctx + ": pattern references a pair absent from pairs.tsv");
      }
      counts.push_back({pattern_names.add(f[0]), it->second,
                        static_cast<uint64_t>(io::parse_int(f[3], ctx))});
    }
  }
  std::vector<uint64_t> totals(pattern_names.size(), 0);
  for (const auto& c : counts) totals[c.pattern] += c.count;
  const auto rank =
      select_top_patterns(totals, pattern_names.words(), totals.size());
  return canonicalize(words.words(), std::move(pairs), pattern_names.words(),
                      counts, rank);
}

void CorpusCounts::save_binary(const std::filesystem::path& path) const {
  io::write_atomically(path, [&](std::ostream& out) {
    io::BinaryWriter w(out);
    w.magic(kCountsMagic);
    w.u64(vocab.size());
    for (const auto& word : vocab.words()) w.str(word);
    w.u64(pairs.size());
    for (const auto& p : pairs) {
      w.u32(p.u);
      w.u32(p.v);
      w.u64(p.sentence_count);
    }
    w.u64(patterns.size());
    for (const auto& p : patterns) w.str(p);
    w.u64(counts.size());
    for (const auto& c : counts) {
      w.u32(c.pattern);
      w.u32(c.pair);
      w.u64(c.count);
    }
  });
}

CorpusCounts CorpusCounts::load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  io::BinaryReader r(in, path.string());
  r.expect_magic(kCountsMagic);
  CorpusCounts out;
  std::vector<std::string> words(r.u64());
  for (auto& w : words) w = r.str();
  out.vocab = Vocabulary(std::move(words));
  out.pairs.resize(r.u64());
  for (auto& p : out.pairs) {
    p.u = r.u32();
    p.v = r.u32();
    p.sentence_count = r.u64();
    if (p.u >= out.vocab.size() || p.v >= out.vocab.size()) {
      throw DataError(path.string() + ": pair word id out of range");
    }
  }
  out.patterns.resize(r.u64());
  for (auto& p : out.patterns) p = r.str();
  out.counts.resize(r.u64());
  for (auto& c : out.counts) {
    c.pattern = r.u32();
    c.pair = r.u32();
    c.count = r.u64();
    if (c.pattern >= out.patterns.size() || c.pair >= out.pairs.size()) {
      throw DataError(path.string() + ": count record out of range");
    }
  }
  r.expect_eof();
  return out;
}

}  // namespace relemb
