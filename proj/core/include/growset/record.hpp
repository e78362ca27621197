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

#include <cstdint>
#include <optional>
#include <string>

#include "growset/embedding.hpp"

namespace growset {

/// A run is in exactly one mode: it decides which optional DataRecord field
/// is active and how records are cleaned and scored.
enum class PipelineMode : std::uint8_t {
  unconditioned = 0,
  multimodal = 1,
  classification = 2,
};

/// One stream element.
struct DataRecord {
  std::string id;
  EmbeddingVector primary;
  std::optional<EmbeddingVector> paired;  // second modality (multimodal mode)
  std::optional<std::int32_t> label;      // class id (classification mode)
  std::optional<std::string> payload_ref; // opaque, e.g. caption or file path
};

/// An admitted record. The gain is frozen at admission time and never
/// updated by later insertions.
struct GainAnnotatedRecord {
  DataRecord record;
  double gain = 0.0;          // in [0, 1]
  std::uint64_t ordinal = 0;  // 0-based admission index
  bool relabeled = false;
};

}  // namespace growset
