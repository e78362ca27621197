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

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "growset/ann/hnsw.hpp"
#include "growset/cleaner.hpp"
#include "growset/config.hpp"
#include "growset/record.hpp"

namespace growset {

struct Counters {
  std::uint64_t seen = 0;
  std::uint64_t admitted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t relabeled = 0;
};

struct RejectedEntry {
  std::string id;
  std::string reason;
  double score = 0.0;
};

struct StepResult {
  bool admitted = false;
  double gain = 0.0;
  bool relabeled = false;
  std::string reason;  // set on rejection
};

struct PipelineStats {
  Counters counters;
  std::array<std::uint64_t, 20> gain_histogram{};  // 20 bins over [0, 1]
  double delta_threshold = 0.0;
  std::size_t primary_index_size = 0;
  std::size_t paired_index_size = 0;
};

/// Orchestrates one growth step per record: clean, query the neighborhood,
/// compose the gain, append to the manifest, insert into the index(es) —
/// in exactly that order, so a record is never its own neighbor and gains
/// are frozen at admission.
class GrowthPipeline {
 public:
  explicit GrowthPipeline(PipelineConfig cfg, RelabelHook hook = {});

  StepResult step(const DataRecord& record);

  /// Folds step over a record source (a callable yielding records until
  /// std::nullopt). progress, when set, is called every
  /// config.progress_interval records with the seen count.
  void grow(const std::function<std::optional<DataRecord>()>& next,
            const std::function<void(std::uint64_t)>& progress = {});
  void grow(const std::vector<DataRecord>& records);

  const std::vector<GainAnnotatedRecord>& manifest() const {
    return manifest_;
  }
  const std::vector<RejectedEntry>& rejected_log() const {
    return rejected_log_;
  }
  const PipelineConfig& config() const { return cfg_; }
  PipelineStats stats() const;

  /// Container with versioned sections (config, counters, cleaner stats,
  /// manifest, index snapshots with their RNG cursors), little-endian,
  /// CRC-protected. resume(checkpoint(s)) continues bit-exactly.
  std::string checkpoint() const;
  static GrowthPipeline resume(std::string_view bytes, RelabelHook hook = {});

 private:
  StepResult step_impl(const DataRecord& record);
  void ensure_indexes(const DataRecord& record);
  std::vector<double> distances_of(const std::vector<ann::Neighbor>& n) const;

  PipelineConfig cfg_;
  RelabelHook hook_;
  Cleaner cleaner_;
  std::vector<GainAnnotatedRecord> manifest_;
  std::vector<RejectedEntry> rejected_log_;
  std::vector<std::int32_t> labels_;  // by ordinal, classification mode
  std::optional<ann::HnswIndex> primary_index_;
  std::optional<ann::HnswIndex> paired_index_;
  Counters counters_;
};

}  // namespace growset
