// Copyright 2026-present the growset authors
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

#include "growset/io/binary.hpp"

#include <zlib.h>

#include <fstream>
#include <sstream>

#include "growset/errors.hpp"

namespace growset::io {

std::string_view ByteReader::need(std::size_t n) {
  if (buf_.size() - pos_ < n) {
    throw TruncatedRecord("need " + std::to_string(n) + " bytes at offset " +
                          std::to_string(pos_) + ", have " +
                          std::to_string(buf_.size() - pos_));
  }
  std::string_view out = buf_.substr(pos_, n);
  pos_ += n;
  return out;
}

std::string ByteReader::str() {
  const std::uint32_t n = u32();
  return std::string(need(n));
}

std::uint32_t crc32_of(std::string_view data) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  crc = ::crc32(crc, reinterpret_cast<const Bytef*>(data.data()),
                static_cast<uInt>(data.size()));
  return static_cast<std::uint32_t>(crc);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw Error("IoError", "cannot open " + path);
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    throw Error("IoError", "cannot open " + path + " for writing");
  }
  f.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!f) {
    throw Error("IoError", "short write to " + path);
  }
}

}  // namespace growset::io
