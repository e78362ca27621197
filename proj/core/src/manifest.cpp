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

#include "growset/io/manifest.hpp"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "growset/errors.hpp"
#include "growset/io/binary.hpp"

namespace growset::io {

namespace {

std::string format_gain(double gain) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", gain);
  return buf;
}

std::string json_string(const std::string& s) {
  return nlohmann::json(s).dump();
}

}  // namespace

std::string manifest_to_jsonl(
    const std::vector<GainAnnotatedRecord>& records) {
  std::string out;
  for (const GainAnnotatedRecord& r : records) {
    out += "{\"id\":" + json_string(r.record.id);
    out += ",\"ordinal\":" + std::to_string(r.ordinal);
    out += ",\"gain\":" + format_gain(r.gain);
    out += r.relabeled ? ",\"relabeled\":true" : ",\"relabeled\":false";
    if (r.record.label) {
      out += ",\"label\":" + std::to_string(*r.record.label);
    }
    if (r.record.payload_ref) {
      out += ",\"payload_ref\":" + json_string(*r.record.payload_ref);
    }
    out += "}\n";
  }
  return out;
}

void write_manifest(const std::vector<GainAnnotatedRecord>& records,
                    const std::string& path) {
  write_file(path, manifest_to_jsonl(records));
}

std::vector<ManifestEntry> manifest_from_jsonl(const std::string& text) {
  std::vector<ManifestEntry> out;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id") ||
        !j.contains("ordinal") || !j.contains("gain") ||
        !j.contains("relabeled")) {
      throw MalformedLine("manifest line " + std::to_string(lineno));
    }
    ManifestEntry e;
    try {
      e.id = j["id"].get<std::string>();
      e.ordinal = j["ordinal"].get<std::uint64_t>();
      e.gain = j["gain"].get<double>();
      e.relabeled = j["relabeled"].get<bool>();
      if (j.contains("label")) {
        e.label = j["label"].get<std::int32_t>();
      }
      if (j.contains("payload_ref")) {
        e.payload_ref = j["payload_ref"].get<std::string>();
      }
    } catch (const nlohmann::json::exception&) {
      throw MalformedLine("manifest line " + std::to_string(lineno) +
                          ": wrong field type");
    }
    if (e.gain < 0.0 || e.gain > 1.0) {
      throw MalformedLine("manifest line " + std::to_string(lineno) +
                          ": gain " + std::to_string(e.gain) +
                          " outside [0, 1]");
    }
    if (e.ordinal != out.size()) {
      throw MalformedLine("manifest line " + std::to_string(lineno) +
                          ": ordinal " + std::to_string(e.ordinal) +
                          " breaks contiguity");
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  return manifest_from_jsonl(read_file(path));
}

}  // namespace growset::io
