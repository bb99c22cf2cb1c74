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

#ifndef RELEMB_VOCABULARY_H_
#define RELEMB_VOCABULARY_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace relemb {

using WordId = uint32_t;
using PatternId = uint32_t;
using PairId = uint32_t;

/// Bidirectional word <-> dense id map. Ids are assigned in insertion order.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> words);

  /// Returns the id of `word`, inserting it if new.
  WordId add(std::string_view word);

  std::optional<WordId> find(std::string_view word) const;
  /// Like find() but throws DataError for unknown words.
  WordId at(std::string_view word) const;

  const std::string& word(WordId id) const { return words_.at(id); }
  const std::vector<std::string>& words() const { return words_; }
  size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  bool operator==(const Vocabulary& other) const {
    return words_ == other.words_;
  }

  /// One word per line.
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

 private:
  struct Hash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId, Hash, std::equal_to<>> index_;
};

}  // namespace relemb

#endif  // RELEMB_VOCABULARY_H_
