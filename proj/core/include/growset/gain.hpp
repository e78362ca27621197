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
#include <span>
#include <vector>

#include "growset/embedding.hpp"

namespace growset {

enum class MeanMode : std::uint8_t { arithmetic = 0, harmonic = 1 };

enum class GainComposition : std::uint8_t {
  info_only = 0,
  image_text_average = 1,
  info_entropy_average = 2,
  info_alignment = 3,
};

/// Mean cosine distance of a record to its nearest neighbors, clamped to
/// [0, 1]. Harmonic mode puts more weight on the closest neighbors; any
/// distance below 1e-9 forces the result to 0. Throws EmptyNeighborhood on
/// an empty list (the cold-start rule lives in the pipeline).
double info_gain(std::span<const double> distances, MeanMode mode);

/// 1 - p, where p is the fraction of neighbor labels equal to the query
/// label (a k-NN vote). Throws EmptyNeighborhood.
double entropy_gain(std::int32_t query_label,
                    std::span<const std::int32_t> neighbor_labels);

/// dot(primary, paired) clamped to [0, 1]. Both must be unit vectors of the
/// same dim.
double alignment_gain(const EmbeddingVector& primary,
                      const EmbeddingVector& paired);

/// Per-mode inputs for compose_gain. Only the parts the chosen composition
/// needs have to be present.
struct GainParts {
  std::vector<double> primary_distances;
  std::optional<std::vector<double>> paired_distances;
  std::optional<double> entropy;
  std::optional<double> alignment;
};

/// Combines the per-part gains per the configured composition. The result
/// is clamped to [0, 1]. Throws MissingPart when a required part is absent.
double compose_gain(const GainParts& parts, MeanMode mean_mode,
                    GainComposition composition);

}  // namespace growset
