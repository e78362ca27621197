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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "growset/errors.hpp"
#include "growset/io/binary.hpp"
#include "growset/io/manifest.hpp"
#include "growset/io/stream_file.hpp"

#include "util.hpp"

using namespace growset;

namespace {

std::vector<DataRecord> sample_records(PipelineMode mode, std::size_t n,
                                       std::size_t dim) {
  RngStream rng(5, "records");
  std::vector<DataRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    DataRecord r;
    r.id = "rec_" + std::to_string(i);
    r.primary = test::random_unit(rng, dim);
    if (mode == PipelineMode::multimodal) {
      r.paired = test::random_unit(rng, dim);
    } else if (mode == PipelineMode::classification) {
      r.label = static_cast<std::int32_t>(i % 3);
    }
    if (i % 2 == 0) {
      r.payload_ref = "payload/" + std::to_string(i);
    }
    out.push_back(std::move(r));
  }
  return out;
}

void roundtrip(PipelineMode mode) {
  test::TempDir dir;
  const std::string path = dir.file("stream.gseb");
  const auto records = sample_records(mode, 25, 12);

  io::StreamHeader header;
  header.mode = mode;
  header.dim = 12;
  header.paired_dim = mode == PipelineMode::multimodal ? 12 : 0;
  io::StreamWriter writer(path, header);
  for (const auto& r : records) {
    writer.write(r);
  }
  writer.close();

  io::StreamReader reader(path);
  CHECK(reader.header().count == records.size());
  CHECK(reader.header().mode == mode);
  for (const auto& want : records) {
    const auto got = reader.next();
    REQUIRE(got.has_value());
    CHECK(got->id == want.id);
    CHECK(got->primary == want.primary);
    CHECK(got->paired == want.paired);
    CHECK(got->label == want.label);
    CHECK(got->payload_ref == want.payload_ref);
  }
  CHECK_FALSE(reader.next().has_value());
}

}  // namespace

TEST_CASE("stream roundtrip in every mode") {
  roundtrip(PipelineMode::unconditioned);
  roundtrip(PipelineMode::multimodal);
  roundtrip(PipelineMode::classification);
}

TEST_CASE("stream: truncated mid-record names the byte offset") {
  test::TempDir dir;
  const std::string path = dir.file("stream.gseb");
  const auto records = sample_records(PipelineMode::multimodal, 5, 8);
  io::StreamHeader header;
  header.mode = PipelineMode::multimodal;
  header.dim = 8;
  header.paired_dim = 8;
  {
    io::StreamWriter writer(path, header);
    for (const auto& r : records) {
      writer.write(r);
    }
    writer.close();
  }
  const std::string whole = io::read_file(path);
  const std::string cut = whole.substr(0, whole.size() - 7);
  const std::string cut_path = dir.file("cut.gseb");
  io::write_file(cut_path, cut);

  io::StreamReader reader(cut_path);
  bool threw = false;
  try {
    while (reader.next()) {
    }
  } catch (const TruncatedRecord& e) {
    threw = true;
    CHECK(std::string(e.what()).find("offset") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("stream: bad magic and unsupported version") {
  test::TempDir dir;
  const auto records = sample_records(PipelineMode::unconditioned, 2, 4);
  io::StreamHeader header;
  header.mode = PipelineMode::unconditioned;
  header.dim = 4;
  const std::string path = dir.file("ok.gseb");
  {
    io::StreamWriter writer(path, header);
    for (const auto& r : records) {
      writer.write(r);
    }
    writer.close();
  }
  std::string bytes = io::read_file(path);

  std::string bad = bytes;
  bad[0] = 'Z';
  io::write_file(dir.file("bad_magic.gseb"), bad);
  CHECK_THROWS_AS(io::StreamReader(dir.file("bad_magic.gseb")), BadMagic);

  std::string future = bytes;
  future[4] = 99;  // version low byte
  io::write_file(dir.file("future.gseb"), future);
  CHECK_THROWS_AS(io::StreamReader(dir.file("future.gseb")),
                  VersionUnsupported);
}

TEST_CASE("stream: count 0 means streaming until clean EOF") {
  test::TempDir dir;
  const std::string path = dir.file("streamed.gseb");
  const auto records = sample_records(PipelineMode::unconditioned, 7, 6);
  io::StreamHeader header;
  header.mode = PipelineMode::unconditioned;
  header.dim = 6;
  {
    io::StreamWriter writer(path, header);
    for (const auto& r : records) {
      writer.write(r);
    }
    writer.close();
  }
  // Force the count field (offset 15) back to 0 to simulate a stream whose
  // producer never learned the total.
  std::string bytes = io::read_file(path);
  for (int i = 0; i < 8; ++i) {
    bytes[15 + i] = 0;
  }
  io::write_file(path, bytes);

  io::StreamReader reader(path);
  CHECK(reader.header().count == 0);
  std::size_t n = 0;
  while (reader.next()) {
    ++n;
  }
  CHECK(n == records.size());
}

TEST_CASE("manifest: roundtrip and byte determinism") {
  std::vector<GainAnnotatedRecord> records;
  RngStream rng(9, "manifest");
  for (std::uint64_t i = 0; i < 1000; ++i) {
    GainAnnotatedRecord r;
    r.record.id = "m" + std::to_string(i);
    r.gain = rng.uniform01();
    r.ordinal = i;
    r.relabeled = i % 7 == 0;
    if (i % 3 == 0) {
      r.record.label = static_cast<std::int32_t>(i % 5);
    }
    if (i % 4 == 0) {
      r.record.payload_ref = "p/" + std::to_string(i);
    }
    records.push_back(std::move(r));
  }
  const std::string text = io::manifest_to_jsonl(records);
  CHECK(io::manifest_to_jsonl(records) == text);  // deterministic bytes

  const auto back = io::manifest_from_jsonl(text);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(back[i].id == records[i].record.id);
    CHECK(back[i].ordinal == records[i].ordinal);
    CHECK(back[i].gain == doctest::Approx(records[i].gain).epsilon(1e-8));
    CHECK(back[i].relabeled == records[i].relabeled);
    CHECK(back[i].label == records[i].record.label);
    CHECK(back[i].payload_ref == records[i].record.payload_ref);
  }
}

TEST_CASE("manifest: empty file reads back empty") {
  CHECK(io::manifest_from_jsonl("").empty());
  CHECK(io::manifest_to_jsonl(std::vector<GainAnnotatedRecord>{}).empty());
}

TEST_CASE("manifest: out-of-range gain names the line") {
  const std::string text =
      "{\"id\":\"a\",\"ordinal\":0,\"gain\":0.5,\"relabeled\":false}\n"
      "{\"id\":\"b\",\"ordinal\":1,\"gain\":1.5,\"relabeled\":false}\n";
  bool threw = false;
  try {
    io::manifest_from_jsonl(text);
  } catch (const MalformedLine& e) {
    threw = true;
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("manifest: non-contiguous ordinals and garbage lines rejected") {
  CHECK_THROWS_AS(
      io::manifest_from_jsonl(
          "{\"id\":\"a\",\"ordinal\":1,\"gain\":0.5,\"relabeled\":false}\n"),
      MalformedLine);
  CHECK_THROWS_AS(io::manifest_from_jsonl("not json at all\n"), MalformedLine);
}

TEST_CASE("byte reader: truncation carries the offset") {
  io::ByteWriter w;
  w.u32(7);
  w.u64(9);
  io::ByteReader r(w.data());
  CHECK(r.u32() == 7);
  CHECK(r.u64() == 9);
  CHECK(r.at_end());
  CHECK_THROWS_AS(r.u8(), TruncatedRecord);
}

TEST_CASE("crc32 matches a known vector") {
  // CRC32("123456789") is the standard check value.
  CHECK(io::crc32_of("123456789") == 0xCBF43926u);
}
