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
#include <map>
#include <optional>
#include <string>

#include "growset/ann/hnsw.hpp"
#include "growset/cleaner.hpp"
#include "growset/gain.hpp"
#include "growset/record.hpp"

namespace growset {

struct PipelineConfig {
  PipelineMode mode = PipelineMode::multimodal;
  std::size_t dim = 0;         // 0: taken from the first record / stream header
  std::size_t paired_dim = 0;  // 0: same as dim (multimodal mode)
  std::size_t k = 4;
  MeanMode mean_mode = MeanMode::arithmetic;
  std::optional<GainComposition> composition;  // unset: per-mode default
  CleanerConfig cleaner;
  ann::HnswParams hnsw;
  std::uint64_t seed = 0;
  std::uint64_t progress_interval = 1000;

  /// Per-mode default: multimodal averages the two modality info gains,
  /// classification averages info and entropy gain, unconditioned uses the
  /// info gain alone.
  GainComposition resolved_composition() const;

  /// Throws BadConfig on an illegal combination (k < 1, M < 2, composition
  /// not legal for the mode, ...). Widens ef_search to k.
  void validate();
};

/// Flat key=value parsing ('#' comments, blank lines ignored). Unknown keys
/// are rejected. Later maps win in merge (CLI flags override file values).
std::map<std::string, std::string> parse_kv_file(const std::string& path);
std::map<std::string, std::string> parse_kv_text(const std::string& text);
PipelineConfig pipeline_config_from_kv(
    const std::map<std::string, std::string>& kv);

}  // namespace growset
