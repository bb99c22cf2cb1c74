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

#include "relemb/io.h"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <memory>

#include "relemb/error.h"

namespace relemb::io {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

void BinaryWriter::magic(std::string_view tag) {
  out_.write(tag.data(), static_cast<std::streamsize>(tag.size()));
}

void BinaryWriter::u32(uint32_t v) {
  out_.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void BinaryWriter::u64(uint64_t v) {
  out_.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void BinaryWriter::f64(double v) {
  out_.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void BinaryWriter::str(std::string_view s) {
  u32(static_cast<uint32_t>(s.size()));
  out_.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void BinaryReader::read_exact(char* dst, size_t n) {
  in_.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<size_t>(in_.gcount()) != n) {
    throw DataError(context_ + ": truncated file");
  }
}

void BinaryReader::expect_magic(std::string_view tag) {
  std::string got(tag.size(), '\0');
  read_exact(got.data(), got.size());
  if (got != tag) {
    throw DataError(context_ + ": bad magic, expected " + std::string(tag));
  }
}

uint32_t BinaryReader::u32() {
  uint32_t v;
  read_exact(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

uint64_t BinaryReader::u64() {
  uint64_t v;
  read_exact(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

double BinaryReader::f64() {
  double v;
  read_exact(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

std::string BinaryReader::str() {
  const uint32_t n = u32();
  if (n > (1u << 24)) throw DataError(context_ + ": implausible string length");
  std::string s(n, '\0');
  read_exact(s.data(), n);
  return s;
}

void BinaryReader::expect_eof() {
  if (in_.peek() != std::char_traits<char>::eof()) {
    throw DataError(context_ + ": trailing bytes after payload");
  }
}

void write_atomically(const std::filesystem::path& path,
                      const std::function<void(std::ostream&)>& body,
                      bool binary) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, binary ? std::ios::binary | std::ios::trunc
                                  : std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + tmp.string());
    body(out);
    out.flush();
    if (!out) throw DataError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw DataError("cannot rename " + tmp.string() + " -> " + path.string() +
                    ": " + ec.message());
  }
}

namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

std::string to_hex(const unsigned char* digest, unsigned int len) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size());
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  return to_hex(digest.data(), len);
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  return to_hex(digest.data(), len);
}

std::vector<std::string_view> split(std::string_view s, char delim) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

double parse_double(std::string_view s, const std::string& context) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError(context + ": not a number: '" + std::string(s) + "'");
  }
  return v;
}

long long parse_int(std::string_view s, const std::string& context) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError(context + ": not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace relemb::io
