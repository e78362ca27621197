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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "growset/ann/exact_index.hpp"
#include "growset/ann/hnsw.hpp"
#include "growset/errors.hpp"

#include "util.hpp"

using namespace growset;

namespace {

// Unit vector at a chosen cosine distance from e0 in the (e0, e1) plane.
EmbeddingVector at_distance(double distance, std::size_t dim) {
  const double cos = 1.0 - distance;
  const double sin = std::sqrt(std::max(0.0, 1.0 - cos * cos));
  std::vector<float> v(dim, 0.0f);
  v[0] = static_cast<float>(cos);
  v[1] = static_cast<float>(sin);
  return normalize(v);
}

}  // namespace

TEST_CASE("exact: ascending distances, k capped at size") {
  ann::ExactIndex index(4);
  index.insert(at_distance(0.5, 4), 0);
  index.insert(at_distance(0.1, 4), 1);
  index.insert(at_distance(0.9, 4), 2);
  const EmbeddingVector probe = at_distance(0.0, 4);

  const auto top2 = index.query(probe, 2);
  REQUIRE(top2.size() == 2);
  CHECK(top2[0].ordinal == 1);
  CHECK(top2[1].ordinal == 0);
  CHECK(top2[0].distance == doctest::Approx(0.1).epsilon(1e-5));

  CHECK(index.query(probe, 10).size() == 3);
}

TEST_CASE("exact: equidistant points break ties toward the lower ordinal") {
  ann::ExactIndex index(4);
  const EmbeddingVector p = at_distance(0.3, 4);
  index.insert(p, 5);
  index.insert(p, 2);
  index.insert(p, 9);
  const auto got = index.query(at_distance(0.0, 4), 3);
  REQUIRE(got.size() == 3);
  CHECK(got[0].ordinal == 2);
  CHECK(got[1].ordinal == 5);
  CHECK(got[2].ordinal == 9);
}

TEST_CASE("exact: k-th neighbor distance is nonincreasing as points arrive") {
  const std::size_t dim = 16;
  const std::size_t k = 4;
  RngStream rng(3, "shrink");
  const EmbeddingVector probe = test::random_unit(rng, dim);
  ann::ExactIndex index(dim);
  double last = 2.0;
  for (std::uint64_t i = 0; i < 300; ++i) {
    index.insert(test::random_unit(rng, dim), i);
    const auto got = index.query(probe, k);
    if (got.size() == k) {
      CHECK(got.back().distance <= last + 1e-12);
      last = got.back().distance;
    }
  }
}

TEST_CASE("hnsw: empty and single-point behavior") {
  ann::HnswIndex index(8, ann::HnswParams{}, 1);
  CHECK(index.query(at_distance(0.0, 8), 5).empty());
  index.insert(at_distance(0.2, 8), 0);
  CHECK(index.size() == 1);
  const auto got = index.query(at_distance(0.2, 8), 1);
  REQUIRE(got.size() == 1);
  CHECK(got[0].ordinal == 0);
  CHECK(got[0].distance == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("hnsw: graph invariants hold after every growth stage") {
  const std::size_t dim = 16;
  RngStream rng(17, "inserts");
  ann::HnswIndex index(dim, ann::HnswParams{}, 17);
  for (std::uint64_t i = 0; i < 600; ++i) {
    index.insert(test::random_unit(rng, dim), i);
    if ((i + 1) % 100 == 0) {
      CHECK_NOTHROW(index.validate());
    }
  }
  CHECK(index.size() == 600);
}

TEST_CASE("hnsw: dim mismatch is rejected") {
  ann::HnswIndex index(8, ann::HnswParams{}, 1);
  CHECK_THROWS_AS(index.insert(at_distance(0.1, 4), 0), DimMismatch);
  CHECK_THROWS_AS(index.query(at_distance(0.1, 4), 1), DimMismatch);
}

TEST_CASE("hnsw: recall@10 vs the exact oracle") {
  const std::size_t dim = 32;
  const std::size_t n = 3000;
  const std::size_t k = 10;
  RngStream rng(23, "recall");
  ann::HnswIndex hnsw(dim, ann::HnswParams{}, 23);
  ann::ExactIndex exact(dim);
  for (std::uint64_t i = 0; i < n; ++i) {
    const EmbeddingVector v = test::random_unit(rng, dim);
    hnsw.insert(v, i);
    exact.insert(v, i);
  }
  std::size_t hits = 0;
  const std::size_t queries = 100;
  for (std::size_t q = 0; q < queries; ++q) {
    const EmbeddingVector probe = test::random_unit(rng, dim);
    const auto approx = hnsw.query(probe, k);
    const auto truth = exact.query(probe, k);
    for (const auto& t : truth) {
      for (const auto& a : approx) {
        if (a.ordinal == t.ordinal) {
          ++hits;
          break;
        }
      }
    }
  }
  const double recall = static_cast<double>(hits) / (queries * k);
  CHECK(recall >= 0.95);
}

TEST_CASE("hnsw: identical seed and insertion order give identical answers") {
  const std::size_t dim = 16;
  auto build = [&] {
    RngStream rng(29, "det");
    ann::HnswIndex index(dim, ann::HnswParams{}, 29);
    for (std::uint64_t i = 0; i < 500; ++i) {
      index.insert(test::random_unit(rng, dim), i);
    }
    return index;
  };
  const ann::HnswIndex a = build();
  const ann::HnswIndex b = build();
  RngStream probe_rng(30, "probes");
  for (int q = 0; q < 50; ++q) {
    const EmbeddingVector probe = test::random_unit(probe_rng, dim);
    const auto ra = a.query(probe, 8);
    const auto rb = b.query(probe, 8);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
      CHECK(ra[i].ordinal == rb[i].ordinal);
      CHECK(ra[i].distance == rb[i].distance);
    }
  }
}

TEST_CASE("hnsw: snapshot roundtrip answers identically") {
  const std::size_t dim = 16;
  RngStream rng(41, "snap");
  ann::HnswIndex index(dim, ann::HnswParams{}, 41);
  for (std::uint64_t i = 0; i < 400; ++i) {
    index.insert(test::random_unit(rng, dim), i);
  }
  const std::string bytes = index.snapshot();
  const ann::HnswIndex restored = ann::HnswIndex::restore(bytes);
  CHECK(restored.size() == index.size());
  CHECK_NOTHROW(restored.validate());
  for (int q = 0; q < 100; ++q) {
    const EmbeddingVector probe = test::random_unit(rng, dim);
    const auto ra = index.query(probe, 6);
    const auto rb = restored.query(probe, 6);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
      CHECK(ra[i].ordinal == rb[i].ordinal);
      CHECK(ra[i].distance == rb[i].distance);
    }
  }
}

TEST_CASE("hnsw: snapshot survives and resumes further inserts") {
  const std::size_t dim = 16;
  RngStream rng(43, "resume");
  std::vector<EmbeddingVector> points;
  for (int i = 0; i < 200; ++i) {
    points.push_back(test::random_unit(rng, dim));
  }
  ann::HnswIndex whole(dim, ann::HnswParams{}, 43);
  for (std::uint64_t i = 0; i < points.size(); ++i) {
    whole.insert(points[i], i);
  }
  ann::HnswIndex half(dim, ann::HnswParams{}, 43);
  for (std::uint64_t i = 0; i < 100; ++i) {
    half.insert(points[i], i);
  }
  ann::HnswIndex resumed = ann::HnswIndex::restore(half.snapshot());
  for (std::uint64_t i = 100; i < points.size(); ++i) {
    resumed.insert(points[i], i);
  }
  // Same RNG cursor after restore, so the graphs match exactly.
  CHECK(resumed.snapshot() == whole.snapshot());
}

TEST_CASE("hnsw: corrupt snapshots are rejected") {
  ann::HnswIndex index(8, ann::HnswParams{}, 7);
  RngStream rng(7, "corrupt");
  for (std::uint64_t i = 0; i < 50; ++i) {
    index.insert(test::random_unit(rng, 8), i);
  }
  const std::string bytes = index.snapshot();

  CHECK_THROWS_AS(ann::HnswIndex::restore(bytes.substr(0, bytes.size() / 2)),
                  CorruptSnapshot);

  std::string flipped = bytes;
  flipped[flipped.size() / 2] ^= 0x40;
  CHECK_THROWS_AS(ann::HnswIndex::restore(flipped), CorruptSnapshot);

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(ann::HnswIndex::restore(bad_magic), CorruptSnapshot);
}

TEST_CASE("hnsw: empty index snapshot is restorable") {
  ann::HnswIndex index(8, ann::HnswParams{}, 3);
  const ann::HnswIndex restored = ann::HnswIndex::restore(index.snapshot());
  CHECK(restored.size() == 0);
  CHECK(restored.query(at_distance(0.1, 8), 3).empty());
}
