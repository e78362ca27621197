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

#include <cstddef>
#include <span>
#include <vector>

namespace growset {

/// Fixed-dimension embedding. Values are stored as float32; all arithmetic
/// on them accumulates in double.
struct EmbeddingVector {
  std::vector<float> values;

  std::size_t dim() const { return values.size(); }
  bool operator==(const EmbeddingVector&) const = default;
};

/// Unit-normalizes a raw vector. Throws ZeroVector when the Euclidean norm
/// is <= 1e-12 and NonFinite when any component is NaN/Inf.
EmbeddingVector normalize(std::span<const float> raw);

inline EmbeddingVector normalize(const EmbeddingVector& v) {
  return normalize(std::span<const float>(v.values));
}

/// Dot product with 64-bit accumulation. Throws DimMismatch.
double dot(const EmbeddingVector& a, const EmbeddingVector& b);

/// 1 - dot(a, b); range [0, 2] on unit vectors. Throws DimMismatch.
double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b);

}  // namespace growset
