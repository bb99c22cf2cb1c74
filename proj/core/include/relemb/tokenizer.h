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

// Sentence-splitting tokenizer for UTF-8 text.
//
// Tokens are lowercased (ASCII only) and split on whitespace. Each ASCII
// punctuation character becomes its own token, except '-', '\'' and '.'
// when they sit between two word characters ("well-known", "don't", "3.5").
// A sentence ends after '.', '!' or '?', at a blank line, and at end of input.
// Lines that are not valid UTF-8 are dropped and counted.

#ifndef RELEMB_TOKENIZER_H_
#define RELEMB_TOKENIZER_H_

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace relemb {

using Sentence = std::vector<std::string>;

struct TokenizeStats {
  size_t lines = 0;
  size_t skipped_lines = 0;  // malformed UTF-8
  size_t sentences = 0;
  size_t tokens = 0;
};

bool is_valid_utf8(std::string_view s);

/// True when the token can fill a slot of a word pair: it has at least one
/// alphanumeric or non-ASCII character.
bool is_word_token(std::string_view token);

/// Streams sentences from a text source one at a time.
class SentenceReader {
 public:
  explicit SentenceReader(std::istream& in) : in_(in) {}

  /// Fills `out` with the next non-empty sentence; false at end of input.
  bool next(Sentence& out);

  const TokenizeStats& stats() const { return stats_; }

 private:
  void tokenize_line(std::string_view line);

  std::istream& in_;
  TokenizeStats stats_;
  std::vector<Sentence> ready_;
  size_t ready_pos_ = 0;
  Sentence current_;
  bool eof_ = false;
};

std::vector<Sentence> tokenize(std::string_view text,
                               TokenizeStats* stats = nullptr);

}  // namespace relemb

#endif  // RELEMB_TOKENIZER_H_
