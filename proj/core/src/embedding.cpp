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

#include "growset/embedding.hpp"

#include <cmath>

#include "growset/errors.hpp"

namespace growset {

EmbeddingVector normalize(std::span<const float> raw) {
  double sumsq = 0.0;
  for (float x : raw) {
    if (!std::isfinite(x)) {
      throw NonFinite("vector contains a NaN/Inf component");
    }
    sumsq += static_cast<double>(x) * static_cast<double>(x);
  }
  const double norm = std::sqrt(sumsq);
  if (norm <= 1e-12) {
    throw ZeroVector("cannot normalize a (near-)zero vector");
  }
  EmbeddingVector out;
  out.values.reserve(raw.size());
  for (float x : raw) {
    out.values.push_back(static_cast<float>(static_cast<double>(x) / norm));
  }
  return out;
}

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw DimMismatch("dot: dims " + std::to_string(a.dim()) + " vs " +
                      std::to_string(b.dim()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    acc += static_cast<double>(a.values[i]) * static_cast<double>(b.values[i]);
  }
  return acc;
}

double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b) {
  const double d = 1.0 - dot(a, b);
  // float32 unit vectors self-dot to 1 +- ~1e-7; snap so that identical
  // vectors get distance exactly 0 (duplicates must score zero gain).
  if (d < 1e-7) {
    return 0.0;
  }
  return d;
}

}  // namespace growset
