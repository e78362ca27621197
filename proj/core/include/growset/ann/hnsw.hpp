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
#include <string>
#include <string_view>
#include <vector>

#include "growset/ann/exact_index.hpp"
#include "growset/embedding.hpp"
#include "growset/rng.hpp"

namespace growset::ann {

struct HnswParams {
  std::uint32_t M = 16;
  std::uint32_t ef_construction = 200;
  std::uint32_t ef_search = 128;
};

/// Online hierarchical navigable small-world graph over unit vectors with
/// cosine distance. Insert-only; ties everywhere break toward the lower
/// insertion ordinal so that a fixed seed and insertion order produce a
/// fixed graph and fixed query answers.
///
/// Deviation from the textbook construction: when a neighbor list is shrunk
/// past its degree cap, the dropped edge is removed from both endpoints, so
/// per-level adjacency stays symmetric after every insertion.
class HnswIndex {
 public:
  HnswIndex(std::size_t dim, HnswParams params, std::uint64_t seed,
            std::string_view stream_label = "hnsw");

  /// Inserts a unit vector; the level is drawn from the index's own seeded
  /// stream. Returns the internal node id.
  std::uint32_t insert(const EmbeddingVector& v, std::uint64_t ordinal);

  /// Up to k nearest neighbors, ascending by (distance, ordinal). The
  /// effective ef is max(ef_search, k).
  std::vector<Neighbor> query(const EmbeddingVector& v, std::size_t k) const;

  std::size_t size() const { return nodes_.size(); }
  std::size_t dim() const { return dim_; }
  const HnswParams& params() const { return params_; }
  std::int32_t top_level() const { return top_level_; }

  /// Snapshot format: magic "GSNN", version u16, dim u32, count u64, params
  /// block, rng state, nodes + adjacency, all little-endian, trailing CRC32.
  std::string snapshot() const;
  static HnswIndex restore(std::string_view bytes);

  /// Checks the graph invariants (adjacency symmetry, degree caps, level
  /// structure, entry point maximality). Throws Error on violation.
  void validate() const;

 private:
  struct Node {
    std::uint64_t ordinal;
    std::uint32_t level;
    EmbeddingVector vec;
    // neighbors[l] for l in [0, level]; ids into nodes_.
    std::vector<std::vector<std::uint32_t>> neighbors;
  };

  struct Candidate {
    double distance;
    std::uint32_t id;
  };

  double distance_to(std::uint32_t id, const EmbeddingVector& v) const;
  bool closer(const Candidate& a, const Candidate& b) const;
  std::uint32_t greedy_descend(const EmbeddingVector& v, std::uint32_t start,
                               std::int32_t from_level,
                               std::int32_t to_level) const;
  std::vector<Candidate> search_layer(const EmbeddingVector& v,
                                      std::uint32_t entry, std::size_t ef,
                                      std::int32_t level) const;
  std::vector<std::uint32_t> select_neighbors(
      std::vector<Candidate> candidates, std::size_t max_count,
      std::vector<std::uint32_t>* pruned = nullptr) const;
  void shrink_neighbors(std::uint32_t id, std::int32_t level);
  std::size_t max_degree(std::int32_t level) const {
    return level == 0 ? 2 * params_.M : params_.M;
  }

  std::size_t dim_;
  HnswParams params_;
  double level_mult_;
  std::vector<Node> nodes_;
  std::int64_t entry_ = -1;
  std::int32_t top_level_ = -1;
  RngStream rng_;
};

}  // namespace growset::ann
