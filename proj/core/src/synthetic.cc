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

#include "relemb/synthetic.h"

#include <algorithm>
#include <random>
#include <sstream>

#include "relemb/corpus.h"
#include "relemb/error.h"
#include "relemb/io.h"

namespace relemb {
namespace {

const char* const kRelationNames[] = {
    "capital", "gram-plural", "currency", "gram-past", "family",
    "gram-comparative", "habitat", "gram-gerund", "material", "gram-opposite"};

// Pronounceable pseudo-word from a counter; distinct inputs give distinct
// words.
std::string pseudo_word(size_t n, const char* suffix) {
  static const char* const kOnset[] = {"b", "d", "f", "g", "k", "l", "m",
                                       "n", "p", "r", "s", "t", "v", "z"};
  static const char* const kVowel[] = {"a", "e", "i", "o", "u"};
  std::string w;
  do {
    w += kOnset[n % 14];
    n /= 14;
    w += kVowel[n % 5];
    n /= 5;
  } while (n > 0);
  return w + suffix;
}

size_t uniform(std::mt19937_64& rng, size_t n) {
  return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticOptions& o) {
  if (o.relations < 2 || o.pairs_per_relation < 2 || o.phrases_per_relation < 1 ||
      o.phrases_per_relation > 31) {
    throw UsageError(
        "synthetic corpus needs >= 2 relations of >= 2 pairs and 1..31 phrases");
  }
  std::mt19937_64 rng(o.seed);
  SyntheticCorpus out;

  size_t word_counter = 0;
  for (size_t r = 0; r < o.relations; ++r) {
    PlantedRelation rel;
    rel.name = r < std::size(kRelationNames)
                   ? kRelationNames[r]
                   : "relation" + std::to_string(r);
    for (size_t i = 0; i < o.pairs_per_relation; ++i) {
      const size_t base = 1000 + word_counter;
      rel.pairs.emplace_back(pseudo_word(base, "x"), pseudo_word(base, "y"));
      ++word_counter;
    }
    // Each phrase is a single relation-specific connector word. Multi-word
    // connectors would pair with the relation's words and form shortcut
    // pairs that carry the relation on their own.
    for (size_t j = 0; j < o.phrases_per_relation; ++j) {
      rel.phrases.push_back({pseudo_word(r * 31 + j + 11, "k")});
    }
    out.relations.push_back(std::move(rel));
  }

  // Which phrases each pair is seen with, plus one fixed phrase borrowed
  // from another relation that it uses in noisy sentences. Borrowing the
  // same phrase repeatedly gives weak but positive cross-relation overlap.
  std::vector<std::vector<std::vector<size_t>>> allowed(o.relations);
  std::vector<std::vector<const std::vector<std::string>*>> borrowed(o.relations);
  for (size_t r = 0; r < o.relations; ++r) {
    for (size_t i = 0; i < o.pairs_per_relation; ++i) {
      std::vector<size_t> idx(o.phrases_per_relation);
      for (size_t j = 0; j < idx.size(); ++j) idx[j] = j;
      std::shuffle(idx.begin(), idx.end(), rng);
      const size_t keep = std::max<size_t>(
          1, static_cast<size_t>(o.phrase_coverage * idx.size() + 0.5));
      idx.resize(std::min(keep, idx.size()));
      allowed[r].push_back(std::move(idx));
      size_t other = uniform(rng, o.relations - 1);
      if (other >= r) ++other;
      const auto& ph = out.relations[other].phrases;
      borrowed[r].push_back(&ph[uniform(rng, ph.size())]);
    }
  }

  std::vector<std::string> fillers;
  for (size_t f = 0; f < o.filler_words; ++f) fillers.push_back(pseudo_word(f, "n"));
  auto filler = [&]() -> std::string { return fillers[uniform(rng, fillers.size())]; };

  std::ostringstream text;
  std::bernoulli_distribution noisy(o.noise);
  for (size_t s = 0; s < o.sentences; ++s) {
    const size_t r = uniform(rng, o.relations);
    const size_t i = uniform(rng, o.pairs_per_relation);
    const auto& [u, v] = out.relations[r].pairs[i];
    const std::vector<std::string>* phrase;
    if (noisy(rng)) {
      phrase = borrowed[r][i];
    } else {
      const auto& idx = allowed[r][i];
      phrase = &out.relations[r].phrases[idx[uniform(rng, idx.size())]];
    }
    std::vector<std::string> sent;
    for (size_t k = uniform(rng, 3); k > 0; --k) sent.push_back(filler());
    sent.push_back(u);
    sent.insert(sent.end(), phrase->begin(), phrase->end());
    sent.push_back(v);
    for (size_t k = uniform(rng, 4); k > 0; --k) sent.push_back(filler());
    for (size_t k = 0; k < sent.size(); ++k) text << (k ? " " : "") << sent[k];
    text << " .\n";
    out.token_count += sent.size() + 1;
  }
  out.text = text.str();

  std::ostringstream google;
  std::ostringstream choice;
  for (size_t r = 0; r < o.relations; ++r) {
    const auto& rel = out.relations[r];
    google << ": " << rel.name << '\n';
    for (size_t i = 0; i < rel.pairs.size(); ++i) {
      for (size_t j = 0; j < rel.pairs.size(); ++j) {
        if (i == j) continue;
        google << rel.pairs[i].first << ' ' << rel.pairs[i].second << ' '
               << rel.pairs[j].first << ' ' << rel.pairs[j].second << '\n';
      }
    }
    // One choice question per pair: the gold is another pair of the same
    // relation, distractors come from other relations.
    for (size_t i = 0; i < rel.pairs.size(); ++i) {
      std::vector<std::pair<std::string, std::string>> cands;
      size_t j = uniform(rng, rel.pairs.size() - 1);
      if (j >= i) ++j;
      cands.push_back(rel.pairs[j]);
      while (cands.size() < 5) {
        size_t other = uniform(rng, o.relations - 1);
        if (other >= r) ++other;
        const auto& p = out.relations[other].pairs;
        cands.push_back(p[uniform(rng, p.size())]);
      }
      std::shuffle(cands.begin(), cands.end(), rng);
      const size_t gold = static_cast<size_t>(
          std::find(cands.begin(), cands.end(), rel.pairs[j]) - cands.begin());
      choice << rel.pairs[i].first << '\t' << rel.pairs[i].second;
      for (const auto& [c, d] : cands) choice << '\t' << c << '\t' << d;
      choice << '\t' << gold << '\n';
    }
  }
  out.google_questions = google.str();
  out.choice_questions = choice.str();
  return out;
}

void write_synthetic(const SyntheticCorpus& corpus,
                     const std::filesystem::path& dir) {
  auto put = [&](const char* name, const std::string& body) {
    io::write_atomically(dir / name, [&](std::ostream& o) { o << body; }, false);
  };
  put("corpus.txt", corpus.text);
  put("questions-words.txt", corpus.google_questions);
  put("choice.tsv", corpus.choice_questions);
  std::vector<std::string> stop;
  for (const auto& w : default_stopwords()) stop.push_back(w);
  std::sort(stop.begin(), stop.end());
  std::string body = "# default stop-word list\n";
  for (const auto& w : stop) body += w + "\n";
  put("stopwords.txt", body);
}

}  // namespace relemb
