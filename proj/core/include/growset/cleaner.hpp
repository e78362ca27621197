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
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "growset/ann/hnsw.hpp"
#include "growset/record.hpp"

namespace growset {

enum class DeltaMode : std::uint8_t { fixed = 0, online_stats = 1 };

struct CleanerConfig {
  DeltaMode delta_mode = DeltaMode::fixed;
  double delta = 0.3;          // fixed threshold, and online fallback
  double z = 1.0;              // online mode: threshold = mean - z * stddev
  std::uint64_t warmup = 100;  // observations before the online rule kicks in
};

/// Welford accumulator over observed pair-similarity scores.
struct OnlineStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void update(double x);
  double variance() const;
  double stddev() const;
};

/// Replacement condition returned by a relabel hook: a new paired-modality
/// embedding or a new class label.
struct RelabelResult {
  std::optional<EmbeddingVector> paired;
  std::optional<std::int32_t> label;
};

/// Returns std::nullopt when the hook has no replacement to offer. May throw
/// HookFailure; the pipeline turns that into a rejection and continues.
using RelabelHook =
    std::function<std::optional<RelabelResult>(const DataRecord&)>;

/// Cosine similarity of the two modality embeddings. Throws MissingPair.
double score_pair(const DataRecord& record);

/// Reference P(c|d) estimator for classification mode: the fraction of the
/// k nearest admitted neighbors whose label equals the record's. Labels are
/// indexed by ordinal. Throws EmptyCleanSet when the index is empty.
double classify_score(const DataRecord& record,
                      const ann::HnswIndex& clean_index,
                      std::span<const std::int32_t> labels, std::size_t k);

/// Noise gate: scores a record, applies at most one relabel attempt, and
/// either passes the (possibly relabeled) record or rejects it.
class Cleaner {
 public:
  explicit Cleaner(CleanerConfig cfg) : cfg_(cfg) {}

  struct Outcome {
    bool passed = false;
    DataRecord record;
    bool relabeled = false;
    double score = 0.0;
    std::string reason;  // set on rejection
  };

  /// score_fn must be pure in the record. In online_stats mode the
  /// pre-relabel score feeds the running statistics before the threshold is
  /// evaluated; post-relabel scores never do.
  Outcome clean(const DataRecord& record,
                const std::function<double(const DataRecord&)>& score_fn,
                const RelabelHook& hook);

  double threshold() const;
  const CleanerConfig& config() const { return cfg_; }
  const OnlineStats& stats() const { return stats_; }
  void restore_stats(const OnlineStats& s) { stats_ = s; }

 private:
  CleanerConfig cfg_;
  OnlineStats stats_;
};

}  // namespace growset
