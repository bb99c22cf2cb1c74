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

#include "relemb/vocabulary.h"

#include <fstream>

#include "relemb/error.h"
#include "relemb/io.h"

namespace relemb {

Vocabulary::Vocabulary(std::vector<std::string> words) {
  words_.reserve(words.size());
  for (auto& w : words) {
    if (index_.contains(w)) throw DataError("duplicate vocabulary word: " + w);
    index_.emplace(w, static_cast<WordId>(words_.size()));
    words_.push_back(std::move(w));
  }
}

WordId Vocabulary::add(std::string_view word) {
  if (auto it = index_.find(word); it != index_.end()) return it->second;
  const auto id = static_cast<WordId>(words_.size());
  words_.emplace_back(word);
  index_.emplace(words_.back(), id);
  return id;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  if (auto it = index_.find(word); it != index_.end()) return it->second;
  return std::nullopt;
}

WordId Vocabulary::at(std::string_view word) const {
  if (auto id = find(word)) return *id;
  throw DataError("word not in vocabulary: " + std::string(word));
}

void Vocabulary::save(const std::filesystem::path& path) const {
  io::write_atomically(
      path,
      [&](std::ostream& out) {
        for (const auto& w : words_) out << w << '\n';
      },
      /*binary=*/false);
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vocabulary " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    words.push_back(line);
  }
  return Vocabulary(std::move(words));
}

}  // namespace relemb
