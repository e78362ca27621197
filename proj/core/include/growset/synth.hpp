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
#include <string>
#include <unordered_map>
#include <vector>

#include "growset/record.hpp"

namespace growset {

/// Synthetic cluster stream. Cluster centers are orthonormalized random
/// directions (pairwise cosine similarity 0); points are unit-normalized
/// center + spread * gaussian perturbations. Noise corrupts a record's
/// condition: a multimodal record gets a paired embedding drawn from a
/// different cluster, a classification record gets a shuffled label.
struct SynthSpec {
  std::size_t clusters = 2;
  std::size_t dim = 32;
  std::size_t points_per_cluster = 500;
  double spread = 0.15;       // intra-cluster perturbation scale
  double pair_spread = 0.05;  // clean paired-embedding perturbation scale
  double noise_fraction = 0.0;
  double duplicate_fraction = 0.0;
  PipelineMode mode = PipelineMode::multimodal;
  std::uint64_t seed = 0;
};

struct SynthResult {
  std::vector<DataRecord> records;  // shuffled stream order
  std::vector<std::string> noisy_ids;
  std::vector<std::string> duplicate_ids;
  // Ground truth for noisy records, for relabel hooks.
  std::unordered_map<std::string, EmbeddingVector> true_paired;
  std::unordered_map<std::string, std::int32_t> true_label;
};

SynthResult synthesize(const SynthSpec& spec);

SynthSpec synth_spec_from_kv(const std::map<std::string, std::string>& kv);

/// JSON sidecar: {"noisy_ids": [...], "duplicate_ids": [...],
/// "true_paired": {id: [floats]}, "true_label": {id: int}}.
void write_truth_sidecar(const SynthResult& result, const std::string& path);

}  // namespace growset
