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

#include "growset/cleaner.hpp"

#include <cmath>

#include "growset/errors.hpp"

namespace growset {

void OnlineStats::update(double x) {
  ++count;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
}

double OnlineStats::variance() const {
  return count > 1 ? m2 / static_cast<double>(count) : 0.0;
}

double OnlineStats::stddev() const { return std::sqrt(variance()); }

double score_pair(const DataRecord& record) {
  if (!record.paired) {
    throw MissingPair("record " + record.id + " has no paired embedding");
  }
  return dot(record.primary, *record.paired);
}

double classify_score(const DataRecord& record,
                      const ann::HnswIndex& clean_index,
                      std::span<const std::int32_t> labels, std::size_t k) {
  if (clean_index.size() == 0) {
    throw EmptyCleanSet("no admitted records to vote with");
  }
  if (!record.label) {
    throw MissingPair("record " + record.id + " has no label");
  }
  const auto neighbors = clean_index.query(record.primary, k);
  std::size_t matches = 0;
  for (const auto& n : neighbors) {
    if (labels[n.ordinal] == *record.label) {
      ++matches;
    }
  }
  return static_cast<double>(matches) / static_cast<double>(neighbors.size());
}

double Cleaner::threshold() const {
  if (cfg_.delta_mode == DeltaMode::fixed || stats_.count < cfg_.warmup) {
    return cfg_.delta;
  }
  return stats_.mean - cfg_.z * stats_.stddev();
}

Cleaner::Outcome Cleaner::clean(
    const DataRecord& record,
    const std::function<double(const DataRecord&)>& score_fn,
    const RelabelHook& hook) {
  Outcome out;
  const double score = score_fn(record);
  if (cfg_.delta_mode == DeltaMode::online_stats) {
    stats_.update(score);
  }
  const double delta = threshold();
  if (score >= delta) {
    out.passed = true;
    out.record = record;
    out.score = score;
    return out;
  }
  if (!hook) {
    out.reason = "noise (score below threshold, no relabel hook)";
    out.score = score;
    return out;
  }
  std::optional<RelabelResult> replacement = hook(record);
  if (!replacement || (!replacement->paired && !replacement->label)) {
    out.reason = "noise (relabel hook returned no replacement)";
    out.score = score;
    return out;
  }
  DataRecord relabeled = record;
  if (replacement->paired) {
    if (record.paired && replacement->paired->dim() != record.paired->dim()) {
      throw HookFailure("hook returned paired embedding of dim " +
                        std::to_string(replacement->paired->dim()) +
                        ", expected " + std::to_string(record.paired->dim()));
    }
    relabeled.paired = normalize(*replacement->paired);
  }
  if (replacement->label) {
    relabeled.label = *replacement->label;
  }
  const double rescore = score_fn(relabeled);
  if (rescore >= delta) {
    out.passed = true;
    out.record = std::move(relabeled);
    out.relabeled = true;
    out.score = rescore;
    return out;
  }
  out.reason = "noise (still below threshold after relabel)";
  out.score = rescore;
  return out;
}

}  // namespace growset
