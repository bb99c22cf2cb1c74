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

#include "relemb/tokenizer.h"

#include <sstream>

namespace relemb {
namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

bool is_ascii_punct(unsigned char c) {
  return c < 0x80 && !is_space(c) && !(c >= '0' && c <= '9') &&
         !(c >= 'a' && c <= 'z') && !(c >= 'A' && c <= 'Z') && c >= 0x21;
}

bool is_word_char(unsigned char c) {
  return c >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

bool is_terminal(unsigned char c) { return c == '.' || c == '!' || c == '?'; }

char lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                : static_cast<char>(c);
}

}  // namespace

bool is_valid_utf8(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    size_t extra = 0;
    uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong encodings, surrogates, and out-of-range code points.
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) ||
        (extra == 3 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

bool is_word_token(std::string_view token) {
  for (unsigned char c : token) {
    if (is_word_char(c)) return true;
  }
  return false;
}

void SentenceReader::tokenize_line(std::string_view line) {
  auto close_sentence = [&] {
    if (!current_.empty()) {
      stats_.tokens += current_.size();
      ++stats_.sentences;
      ready_.push_back(std::move(current_));
      current_.clear();
    }
  };

  bool blank = true;
  std::string word;
  auto flush_word = [&] {
    if (!word.empty()) {
      current_.push_back(std::move(word));
      word.clear();
    }
  };

  for (size_t i = 0; i < line.size(); ++i) {
    const auto c = static_cast<unsigned char>(line[i]);
    if (is_space(c)) {
      flush_word();
      continue;
    }
    blank = false;
    if (is_word_char(c)) {
      word.push_back(lower(c));
      continue;
    }
    // Joiners stay inside a word when flanked by word characters.
    if ((c == '-' || c == '\'' || c == '.') && !word.empty() &&
        i + 1 < line.size() &&
        is_word_char(static_cast<unsigned char>(line[i + 1]))) {
      word.push_back(static_cast<char>(c));
      continue;
    }
    flush_word();
    if (is_ascii_punct(c)) {
      current_.emplace_back(1, static_cast<char>(c));
      if (is_terminal(c)) close_sentence();
    }
  }
  flush_word();
  if (blank) close_sentence();
}

bool SentenceReader::next(Sentence& out) {
  while (ready_pos_ >= ready_.size()) {
    ready_.clear();
    ready_pos_ = 0;
    if (eof_) return false;
    std::string line;
    if (!std::getline(in_, line)) {
      eof_ = true;
      if (!current_.empty()) {
        stats_.tokens += current_.size();
        ++stats_.sentences;
        ready_.push_back(std::move(current_));
        current_.clear();
      }
      continue;
    }
    ++stats_.lines;
    if (!is_valid_utf8(line)) {
      ++stats_.skipped_lines;
      continue;
    }
    tokenize_line(line);
  }
  out = std::move(ready_[ready_pos_++]);
  return true;
}

std::vector<Sentence> tokenize(std::string_view text, TokenizeStats* stats) {
  std::istringstream in{std::string(text)};
  SentenceReader reader(in);
  std::vector<Sentence> out;
  Sentence s;
  while (reader.next(s)) out.push_back(std::move(s));
  if (stats) *stats = reader.stats();
  return out;
}

}  // namespace relemb
