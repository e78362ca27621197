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
#include <vector>

#include "growset/embedding.hpp"

namespace growset::ann {

struct Neighbor {
  std::uint64_t ordinal;
  double distance;  // cosine distance
};

/// Brute-force nearest-neighbor index. Serves as the correctness oracle for
/// the HNSW index: results are exactly sorted by cosine distance, ties
/// broken by lower ordinal.
class ExactIndex {
 public:
  explicit ExactIndex(std::size_t dim) : dim_(dim) {}

  void insert(const EmbeddingVector& v, std::uint64_t ordinal);
  std::vector<Neighbor> query(const EmbeddingVector& v, std::size_t k) const;

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return dim_; }

 private:
  struct Point {
    EmbeddingVector vec;
    std::uint64_t ordinal;
  };

  std::size_t dim_;
  std::vector<Point> points_;
};

}  // namespace growset::ann
