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

#include "growset/io/stream_file.hpp"

#include "growset/errors.hpp"
#include "growset/io/binary.hpp"

namespace growset::io {

namespace {

constexpr char kMagic[4] = {'G', 'S', 'E', 'B'};
constexpr std::uint16_t kVersion = 1;
// magic + version + mode + dim + paired_dim + count
constexpr std::uint64_t kHeaderSize = 4 + 2 + 1 + 4 + 4 + 8;
constexpr std::uint64_t kCountOffset = 4 + 2 + 1 + 4 + 4;

std::string encode_header(const StreamHeader& h) {
  ByteWriter w;
  w.bytes(kMagic, 4);
  w.u16(kVersion);
  w.u8(static_cast<std::uint8_t>(h.mode));
  w.u32(h.dim);
  w.u32(h.paired_dim);
  w.u64(h.count);
  return w.take();
}

}  // namespace

StreamWriter::StreamWriter(const std::string& path, StreamHeader header)
    : file_(path, std::ios::binary | std::ios::trunc), header_(header) {
  if (!file_) {
    throw Error("IoError", "cannot open " + path + " for writing");
  }
  if (header_.dim == 0) {
    throw BadConfig("stream header dim must be > 0");
  }
  if (header_.mode == PipelineMode::multimodal && header_.paired_dim == 0) {
    header_.paired_dim = header_.dim;
  }
  if (header_.mode != PipelineMode::multimodal) {
    header_.paired_dim = 0;
  }
  const std::string bytes = encode_header(header_);
  file_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

StreamWriter::~StreamWriter() {
  try {
    close();
  } catch (...) {
  }
}

void StreamWriter::write(const DataRecord& record) {
  if (record.primary.dim() != header_.dim) {
    throw DimMismatch("record " + record.id + ": primary dim " +
                      std::to_string(record.primary.dim()) + " vs header " +
                      std::to_string(header_.dim));
  }
  ByteWriter w;
  if (record.id.size() > 0xffff) {
    throw Error("IoError", "record id longer than 65535 bytes");
  }
  w.u16(static_cast<std::uint16_t>(record.id.size()));
  w.bytes(record.id.data(), record.id.size());
  for (float x : record.primary.values) {
    w.f32(x);
  }
  if (header_.mode == PipelineMode::multimodal) {
    if (!record.paired || record.paired->dim() != header_.paired_dim) {
      throw DimMismatch("record " + record.id + ": paired embedding absent "
                        "or of wrong dim");
    }
    for (float x : record.paired->values) {
      w.f32(x);
    }
  }
  if (header_.mode == PipelineMode::classification) {
    if (!record.label) {
      throw MissingPair("record " + record.id + " has no label");
    }
    w.i32(*record.label);
  }
  const std::string& payload = record.payload_ref.value_or("");
  if (payload.size() > 0xffff) {
    throw Error("IoError", "payload_ref longer than 65535 bytes");
  }
  w.u16(static_cast<std::uint16_t>(payload.size()));
  w.bytes(payload.data(), payload.size());

  const std::string& bytes = w.data();
  file_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file_) {
    throw Error("IoError", "short write to stream file");
  }
  ++written_;
}

void StreamWriter::close() {
  if (closed_) {
    return;
  }
  closed_ = true;
  header_.count = written_;
  file_.seekp(static_cast<std::streamoff>(kCountOffset));
  ByteWriter w;
  w.u64(written_);
  file_.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
  file_.close();
  if (!file_) {
    throw Error("IoError", "failed to finalize stream file");
  }
}

StreamReader::StreamReader(const std::string& path)
    : file_(path, std::ios::binary), path_(path) {
  if (!file_) {
    throw Error("IoError", "cannot open " + path);
  }
  std::string header_bytes(kHeaderSize, '\0');
  file_.read(header_bytes.data(), static_cast<std::streamsize>(kHeaderSize));
  if (file_.gcount() != static_cast<std::streamsize>(kHeaderSize)) {
    throw TruncatedRecord(path + ": header truncated");
  }
  ByteReader r(header_bytes);
  if (r.raw(4) != std::string_view(kMagic, 4)) {
    throw BadMagic(path + ": not a GSEB stream file");
  }
  const std::uint16_t version = r.u16();
  if (version != kVersion) {
    throw VersionUnsupported(path + ": stream version " +
                             std::to_string(version));
  }
  const std::uint8_t mode = r.u8();
  if (mode > 2) {
    throw BadMagic(path + ": unknown mode byte " + std::to_string(mode));
  }
  header_.mode = static_cast<PipelineMode>(mode);
  header_.dim = r.u32();
  header_.paired_dim = r.u32();
  header_.count = r.u64();
  offset_ = kHeaderSize;
  if (header_.dim == 0) {
    throw BadMagic(path + ": header dim is 0");
  }
}

std::optional<DataRecord> StreamReader::next() {
  if (header_.count > 0 && read_ == header_.count) {
    return std::nullopt;
  }
  const std::uint64_t record_start = offset_;
  auto fail = [&](const std::string& what) -> TruncatedRecord {
    return TruncatedRecord(path_ + ": " + what + " (record " +
                           std::to_string(read_) + " at byte offset " +
                           std::to_string(record_start) + ")");
  };
  auto read_exact = [&](char* dst, std::size_t n, bool allow_eof_at_start) {
    file_.read(dst, static_cast<std::streamsize>(n));
    const auto got = static_cast<std::size_t>(file_.gcount());
    if (got == n) {
      offset_ += n;
      return true;
    }
    if (got == 0 && allow_eof_at_start) {
      return false;
    }
    throw fail("truncated mid-record");
  };

  char lenbuf[2];
  if (!read_exact(lenbuf, 2, header_.count == 0)) {
    return std::nullopt;  // clean EOF in streaming mode
  }
  const std::uint16_t id_len =
      static_cast<std::uint16_t>(static_cast<unsigned char>(lenbuf[0]) |
                                 (static_cast<unsigned char>(lenbuf[1]) << 8));
  DataRecord record;
  record.id.resize(id_len);
  if (id_len > 0) {
    read_exact(record.id.data(), id_len, false);
  }

  auto read_floats = [&](std::uint32_t dim) {
    std::string buf(static_cast<std::size_t>(dim) * 4, '\0');
    read_exact(buf.data(), buf.size(), false);
    ByteReader r(buf);
    EmbeddingVector v;
    v.values.resize(dim);
    for (std::uint32_t i = 0; i < dim; ++i) {
      v.values[i] = r.f32();
    }
    return v;
  };

  record.primary = read_floats(header_.dim);
  if (header_.mode == PipelineMode::multimodal) {
    record.paired = read_floats(header_.paired_dim);
  }
  if (header_.mode == PipelineMode::classification) {
    char lbuf[4];
    read_exact(lbuf, 4, false);
    ByteReader r(std::string_view(lbuf, 4));
    record.label = r.i32();
  }
  read_exact(lenbuf, 2, false);
  const std::uint16_t payload_len =
      static_cast<std::uint16_t>(static_cast<unsigned char>(lenbuf[0]) |
                                 (static_cast<unsigned char>(lenbuf[1]) << 8));
  if (payload_len > 0) {
    std::string payload(payload_len, '\0');
    read_exact(payload.data(), payload_len, false);
    record.payload_ref = std::move(payload);
  }
  ++read_;
  return record;
}

}  // namespace growset::io
