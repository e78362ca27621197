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

#include <algorithm>
#include <vector>

#include "growset/ann/exact_index.hpp"
#include "growset/errors.hpp"
#include "growset/gain.hpp"

#include "util.hpp"

using namespace growset;

TEST_CASE("info_gain: duplicates have no gain") {
  const std::vector<double> zeros{0.0, 0.0, 0.0};
  CHECK(info_gain(zeros, MeanMode::arithmetic) == 0.0);
  CHECK(info_gain(zeros, MeanMode::harmonic) == 0.0);
}

TEST_CASE("info_gain: arithmetic and harmonic means") {
  const std::vector<double> d{0.5, 0.1};
  CHECK(info_gain(d, MeanMode::arithmetic) == doctest::Approx(0.3));
  CHECK(info_gain(d, MeanMode::harmonic) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-9));
}

TEST_CASE("info_gain: clamp and empty neighborhood") {
  const std::vector<double> big{1.5, 1.7};
  CHECK(info_gain(big, MeanMode::arithmetic) == 1.0);
  CHECK_THROWS_AS(info_gain(std::vector<double>{}, MeanMode::arithmetic),
                  EmptyNeighborhood);
  CHECK_THROWS_AS(info_gain(std::vector<double>{}, MeanMode::harmonic),
                  EmptyNeighborhood);
}

TEST_CASE("info_gain: near-zero distance forces harmonic gain to 0") {
  const std::vector<double> d{0.5, 1e-10};
  CHECK(info_gain(d, MeanMode::harmonic) == 0.0);
}

TEST_CASE("entropy_gain examples") {
  CHECK(entropy_gain(1, std::vector<std::int32_t>{1, 1, 1, 1}) == 0.0);
  CHECK(entropy_gain(1, std::vector<std::int32_t>{2, 3, 2, 0}) == 1.0);
  CHECK(entropy_gain(1, std::vector<std::int32_t>{1, 0, 0, 0}) ==
        doctest::Approx(0.75));
  CHECK_THROWS_AS(entropy_gain(1, std::vector<std::int32_t>{}),
                  EmptyNeighborhood);
}

TEST_CASE("entropy_gain is permutation invariant") {
  std::vector<std::int32_t> labels{0, 1, 1, 2, 0, 1};
  const double base = entropy_gain(1, labels);
  std::sort(labels.begin(), labels.end());
  do {
    CHECK(entropy_gain(1, labels) == base);
  } while (std::next_permutation(labels.begin(), labels.end()));
}

TEST_CASE("alignment_gain: identity, orthogonal, clamp") {
  const EmbeddingVector a = normalize(std::vector<float>{1.0f, 0.0f});
  const EmbeddingVector b = normalize(std::vector<float>{0.0f, 1.0f});
  const EmbeddingVector neg = normalize(std::vector<float>{-0.2f, -0.9f});
  CHECK(alignment_gain(a, a) == doctest::Approx(1.0));
  CHECK(alignment_gain(a, b) == doctest::Approx(0.0));
  CHECK(alignment_gain(a, neg) == 0.0);  // negative dot clamps to 0
}

TEST_CASE("compose_gain per composition") {
  GainParts parts;
  parts.primary_distances = {0.4};
  parts.paired_distances = std::vector<double>{0.2};
  CHECK(compose_gain(parts, MeanMode::arithmetic,
                     GainComposition::image_text_average) ==
        doctest::Approx(0.3));

  GainParts ie;
  ie.primary_distances = {0.6};
  ie.entropy = 0.0;
  CHECK(compose_gain(ie, MeanMode::arithmetic,
                     GainComposition::info_entropy_average) ==
        doctest::Approx(0.3));

  GainParts info;
  info.primary_distances = {1.0, 1.0};
  CHECK(compose_gain(info, MeanMode::arithmetic,
                     GainComposition::info_only) == doctest::Approx(1.0));

  GainParts ia;
  ia.primary_distances = {0.4};
  ia.alignment = 0.8;
  CHECK(compose_gain(ia, MeanMode::arithmetic,
                     GainComposition::info_alignment) == doctest::Approx(0.6));
}

TEST_CASE("compose_gain: missing parts") {
  GainParts parts;
  parts.primary_distances = {0.4};
  CHECK_THROWS_AS(compose_gain(parts, MeanMode::arithmetic,
                               GainComposition::image_text_average),
                  MissingPart);
  CHECK_THROWS_AS(compose_gain(parts, MeanMode::arithmetic,
                               GainComposition::info_entropy_average),
                  MissingPart);
  CHECK_THROWS_AS(compose_gain(parts, MeanMode::arithmetic,
                               GainComposition::info_alignment),
                  MissingPart);
}

TEST_CASE("harmonic <= arithmetic when all distances <= 1 (AM-HM)") {
  RngStream rng(31, "am_hm");
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> d(1 + rng.below(6));
    for (double& x : d) {
      x = rng.uniform01();  // (0, 1]
    }
    CHECK(info_gain(d, MeanMode::harmonic) <=
          info_gain(d, MeanMode::arithmetic) + 1e-12);
  }
}

TEST_CASE("composed gains stay in [0, 1]") {
  RngStream rng(32, "range");
  for (int trial = 0; trial < 200; ++trial) {
    GainParts parts;
    parts.primary_distances.resize(1 + rng.below(4));
    for (double& x : parts.primary_distances) {
      x = 2.0 * rng.uniform01();  // full cosine-distance range
    }
    parts.entropy = rng.uniform01();
    parts.alignment = rng.uniform01();
    parts.paired_distances = parts.primary_distances;
    for (GainComposition c :
         {GainComposition::info_only, GainComposition::image_text_average,
          GainComposition::info_entropy_average,
          GainComposition::info_alignment}) {
      for (MeanMode m : {MeanMode::arithmetic, MeanMode::harmonic}) {
        const double g = compose_gain(parts, m, c);
        CHECK(g >= 0.0);
        CHECK(g <= 1.0);
      }
    }
  }
}

// Set-inclusion monotonicity against the brute-force oracle: gain over the
// superset never exceeds gain over the subset.
TEST_CASE("info_gain is monotone under set growth (exact oracle)") {
  const std::size_t dim = 16;
  RngStream rng(77, "mono");
  std::vector<EmbeddingVector> pool;
  for (int i = 0; i < 200; ++i) {
    pool.push_back(test::random_unit(rng, dim));
  }
  ann::ExactIndex small(dim);
  ann::ExactIndex large(dim);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (i < 50) {
      small.insert(pool[i], i);
    }
    large.insert(pool[i], i);
  }
  for (int probe = 0; probe < 100; ++probe) {
    const EmbeddingVector x = test::random_unit(rng, dim);
    for (std::size_t k : {std::size_t{1}, std::size_t{4}}) {
      for (MeanMode m : {MeanMode::arithmetic, MeanMode::harmonic}) {
        auto gain_over = [&](const ann::ExactIndex& idx) {
          std::vector<double> d;
          for (const auto& n : idx.query(x, k)) {
            d.push_back(n.distance);
          }
          return info_gain(d, m);
        };
        CHECK(gain_over(large) <= gain_over(small) + 1e-12);
      }
    }
  }
}
