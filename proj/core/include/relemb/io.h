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

// Small binary serialization helpers and file utilities shared by the
// artifact formats. Integers and doubles are written little-endian.

#ifndef RELEMB_IO_H_
#define RELEMB_IO_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace relemb::io {

class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void magic(std::string_view tag);
  void u32(uint32_t v);
  void u64(uint64_t v);
  void f64(double v);
  void str(std::string_view s);

 private:
  std::ostream& out_;
};

/// Reader counterpart of BinaryWriter. Every read throws DataError on a
/// short read, so a truncated file never yields a partial object.
class BinaryReader {
 public:
  BinaryReader(std::istream& in, std::string context)
      : in_(in), context_(std::move(context)) {}

  void expect_magic(std::string_view tag);
  uint32_t u32();
  uint64_t u64();
  double f64();
  std::string str();
  /// Throws unless the stream is exhausted.
  void expect_eof();

 private:
  void read_exact(char* dst, size_t n);

  std::istream& in_;
  std::string context_;
};

/// Writes a file by producing it at `path.tmp` and renaming over `path`.
void write_atomically(const std::filesystem::path& path,
                      const std::function<void(std::ostream&)>& body,
                      bool binary = true);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

/// Splits on a single-character delimiter, keeping empty fields.
std::vector<std::string_view> split(std::string_view s, char delim);

/// Splits on runs of ASCII whitespace.
std::vector<std::string_view> split_ws(std::string_view s);

double parse_double(std::string_view s, const std::string& context);
long long parse_int(std::string_view s, const std::string& context);

/// Shortest text form that parses back to the same double.
std::string format_double(double v);

}  // namespace relemb::io

#endif  // RELEMB_IO_H_
