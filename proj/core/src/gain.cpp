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

#include "growset/gain.hpp"

#include <algorithm>

#include "growset/errors.hpp"

namespace growset {

namespace {
double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

double info_gain(std::span<const double> distances, MeanMode mode) {
  if (distances.empty()) {
    throw EmptyNeighborhood("info_gain over an empty distance list");
  }
  if (mode == MeanMode::arithmetic) {
    double sum = 0.0;
    for (double d : distances) {
      sum += d;
    }
    return clamp01(sum / static_cast<double>(distances.size()));
  }
  // harmonic: n / sum(1/d_i); a (near-)zero distance dominates and pins the
  // gain to 0.
  double inv_sum = 0.0;
  for (double d : distances) {
    if (d < 1e-9) {
      return 0.0;
    }
    inv_sum += 1.0 / d;
  }
  return clamp01(static_cast<double>(distances.size()) / inv_sum);
}

double entropy_gain(std::int32_t query_label,
                    std::span<const std::int32_t> neighbor_labels) {
  if (neighbor_labels.empty()) {
    throw EmptyNeighborhood("entropy_gain over an empty label list");
  }
  std::size_t matches = 0;
  for (std::int32_t l : neighbor_labels) {
    if (l == query_label) {
      ++matches;
    }
  }
  const double p = static_cast<double>(matches) /
                   static_cast<double>(neighbor_labels.size());
  return 1.0 - p;
}

double alignment_gain(const EmbeddingVector& primary,
                      const EmbeddingVector& paired) {
  return clamp01(dot(primary, paired));
}

double compose_gain(const GainParts& parts, MeanMode mean_mode,
                    GainComposition composition) {
  const double primary_info = info_gain(parts.primary_distances, mean_mode);
  switch (composition) {
    case GainComposition::info_only:
      return primary_info;
    case GainComposition::image_text_average: {
      if (!parts.paired_distances) {
        throw MissingPart("image_text_average needs paired-modality "
                          "neighbor distances");
      }
      const double paired_info = info_gain(*parts.paired_distances, mean_mode);
      return std::clamp((primary_info + paired_info) / 2.0, 0.0, 1.0);
    }
    case GainComposition::info_entropy_average: {
      if (!parts.entropy) {
        throw MissingPart("info_entropy_average needs an entropy gain");
      }
      return std::clamp((primary_info + *parts.entropy) / 2.0, 0.0, 1.0);
    }
    case GainComposition::info_alignment: {
      if (!parts.alignment) {
        throw MissingPart("info_alignment needs an alignment gain");
      }
      return std::clamp((primary_info + *parts.alignment) / 2.0, 0.0, 1.0);
    }
  }
  throw MissingPart("unknown gain composition");
}

}  // namespace growset
