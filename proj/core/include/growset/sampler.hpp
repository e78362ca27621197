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
#include <span>
#include <string>
#include <vector>

#include "growset/rng.hpp"

namespace growset {

enum class Phase : std::uint8_t {
  static_selection = 0,
  diversity = 1,
  generalization = 2,
};

const char* phase_name(Phase phase);
Phase phase_from_name(const std::string& name);

struct EpochEntry {
  Phase phase;
  std::vector<std::uint64_t> ordinals;  // ascending, unique
};

struct SamplePlan {
  std::vector<EpochEntry> epochs;
};

/// Gain-weighted selection without replacement (exponential-key order
/// statistics): inclusion matches successive draws proportional to the
/// remaining weights. Zero-gain records are never selected; if fewer than
/// `target` records have positive gain, throws TargetTooLarge.
std::vector<std::uint64_t> static_sample(std::span<const double> gains,
                                         std::size_t target, RngStream& rng);

/// Two-phase alternating plan. Odd epochs (the 1st, 3rd, ...) are the
/// diversity phase: weights G_i, count floor(sum G). Even epochs are the
/// generalization phase: weights G'_i = max(0.1, 1 - G_i), count
/// floor(sum G'). Every epoch re-draws from a fresh (seed, epoch) stream.
SamplePlan dynamic_plan(std::span<const double> gains, std::size_t epochs,
                        std::uint64_t seed);

/// That epoch's selection, shuffled under the seeded stream. Throws
/// OutOfRange past the end of the plan.
std::vector<std::uint64_t> epoch_schedule(const SamplePlan& plan,
                                          std::size_t epoch,
                                          std::uint64_t seed);

/// Plan serialization: JSONL, one epoch per line:
/// {"epoch": n, "phase": "...", "ordinals": [...]}.
std::string plan_to_jsonl(const SamplePlan& plan);
SamplePlan plan_from_jsonl(const std::string& text);

}  // namespace growset
