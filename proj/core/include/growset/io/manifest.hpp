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

#include <string>
#include <vector>

#include "growset/record.hpp"

namespace growset::io {

/// One admitted record, as stored in the JSONL manifest:
/// {"id", "ordinal", "gain", "relabeled", "label"?, "payload_ref"?}.
struct ManifestEntry {
  std::string id;
  std::uint64_t ordinal = 0;
  double gain = 0.0;
  bool relabeled = false;
  std::optional<std::int32_t> label;
  std::optional<std::string> payload_ref;
};

/// Byte-deterministic encoding: fixed key order, gains with 9 significant
/// digits.
std::string manifest_to_jsonl(const std::vector<GainAnnotatedRecord>& records);
void write_manifest(const std::vector<GainAnnotatedRecord>& records,
                    const std::string& path);

/// Throws MalformedLine (with the line number) on parse failure, a gain
/// outside [0, 1], or non-contiguous ordinals.
std::vector<ManifestEntry> read_manifest(const std::string& path);
std::vector<ManifestEntry> manifest_from_jsonl(const std::string& text);

}  // namespace growset::io
