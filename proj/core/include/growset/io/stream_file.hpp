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

#pragma once

#include <fstream>
#include <optional>
#include <string>

#include "growset/record.hpp"

namespace growset::io {

/// Binary embedding stream, little-endian throughout.
///
/// Header: magic "GSEB", version u16, mode u8, dim u32, paired_dim u32
/// (0 if absent), count u64 (0 = unknown/streaming).
/// Per record: id length u16 + UTF-8 id, dim float32 primary values,
/// paired_dim float32 paired values (multimodal mode), label i32
/// (classification mode), payload_ref length u16 + UTF-8 (length 0 =
/// absent).
struct StreamHeader {
  PipelineMode mode = PipelineMode::unconditioned;
  std::uint32_t dim = 0;
  std::uint32_t paired_dim = 0;
  std::uint64_t count = 0;
};

class StreamWriter {
 public:
  StreamWriter(const std::string& path, StreamHeader header);
  ~StreamWriter();

  void write(const DataRecord& record);
  /// Patches the actual record count into the header and closes the file.
  void close();

 private:
  std::ofstream file_;
  StreamHeader header_;
  std::uint64_t written_ = 0;
  bool closed_ = false;
};

class StreamReader {
 public:
  explicit StreamReader(const std::string& path);

  const StreamHeader& header() const { return header_; }

  /// Next record in file order, or std::nullopt at a clean end of stream.
  /// Throws TruncatedRecord (naming the byte offset) on a partial record.
  std::optional<DataRecord> next();

 private:
  std::ifstream file_;
  std::string path_;
  StreamHeader header_;
  std::uint64_t read_ = 0;
  std::uint64_t offset_ = 0;
};

}  // namespace growset::io
