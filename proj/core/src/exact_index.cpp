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

#include "growset/ann/exact_index.hpp"

#include <algorithm>

#include "growset/errors.hpp"

namespace growset::ann {

void ExactIndex::insert(const EmbeddingVector& v, std::uint64_t ordinal) {
  if (v.dim() != dim_) {
    throw DimMismatch("exact insert: dim " + std::to_string(v.dim()) +
                      " vs index dim " + std::to_string(dim_));
  }
  points_.push_back({v, ordinal});
}

std::vector<Neighbor> ExactIndex::query(const EmbeddingVector& v,
                                        std::size_t k) const {
  if (v.dim() != dim_) {
    throw DimMismatch("exact query: dim " + std::to_string(v.dim()) +
                      " vs index dim " + std::to_string(dim_));
  }
  std::vector<Neighbor> all;
  all.reserve(points_.size());
  for (const Point& p : points_) {
    all.push_back({p.ordinal, cosine_distance(v, p.vec)});
  }
  const std::size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n),
                    all.end(), [](const Neighbor& a, const Neighbor& b) {
                      if (a.distance != b.distance) {
                        return a.distance < b.distance;
                      }
                      return a.ordinal < b.ordinal;
                    });
  all.resize(n);
  return all;
}

}  // namespace growset::ann
