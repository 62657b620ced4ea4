// core/src/binary_io.h

// Copyright 2026 The tonequant Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Little-endian primitives for the SSLF / SSLK formats. Internal header.

#ifndef TONEQUANT_SRC_BINARY_IO_H_
#define TONEQUANT_SRC_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "tonequant/common.h"

namespace tonequant::detail {

inline std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(fmt::format("{}: cannot open file", path.string()));
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>());
}

inline void write_file_bytes(const std::filesystem::path& path,
                             const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("{}: cannot open file for writing", path.string()));
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(fmt::format("{}: write failed", path.string()));
}

inline void write_file_bytes(const std::filesystem::path& path, std::string_view bytes) {
  write_file_bytes(path, std::vector<unsigned char>(bytes.begin(), bytes.end()));
}

/// Sequential reader over an in-memory file image; every failure names the
/// file and byte offset.
class ByteReader {
 public:
  ByteReader(const std::vector<unsigned char>& bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  std::size_t offset() const { return offset_; }
  std::size_t remaining() const { return bytes_.size() - offset_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError(fmt::format("{}: offset {}: {}", path_.string(), offset_, what));
  }

  void expect_magic(const char (&magic)[5]) {
    if (remaining() < 4 || std::memcmp(bytes_.data() + offset_, magic, 4) != 0)
      fail(fmt::format("bad magic (expected \"{}\")", magic));
    offset_ += 4;
  }

  std::uint32_t u32() {
    if (remaining() < 4) fail("truncated header");
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[offset_ + i];
    offset_ += 4;
    return v;
  }

  std::uint64_t u64() {
    if (remaining() < 8) fail("truncated header");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | bytes_[offset_ + i];
    offset_ += 8;
    return v;
  }

  float f32() { return std::bit_cast<float>(u32()); }

 private:
  const std::vector<unsigned char>& bytes_;
  std::filesystem::path path_;
  std::size_t offset_ = 0;
};

class ByteWriter {
 public:
  void magic(const char (&m)[5]) { bytes_.insert(bytes_.end(), m, m + 4); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  const std::vector<unsigned char>& bytes() const { return bytes_; }
  void reserve(std::size_t n) { bytes_.reserve(n); }

 private:
  std::vector<unsigned char> bytes_;
};

}  // namespace tonequant::detail

#endif  // TONEQUANT_SRC_BINARY_IO_H_
