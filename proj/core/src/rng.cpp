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

#include "growset/rng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace growset {

namespace {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::string_view label) {
  const std::uint64_t lh = fnv1a64(label);
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(lh), static_cast<std::uint32_t>(lh >> 32)};
  engine_.seed(seq);
}

double RngStream::uniform01() {
  // 53 random bits, shifted into (0, 1].
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

std::uint64_t RngStream::below(std::uint64_t n) {
  const std::uint64_t rem = std::numeric_limits<std::uint64_t>::max() % n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x > limit);
  return x % n;
}

double RngStream::gaussian() {
  const double u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::string RngStream::save_state() const {
  std::ostringstream os;
  os << engine_;
  return os.str();
}

void RngStream::restore_state(const std::string& state) {
  std::istringstream is(state);
  is >> engine_;
}

}  // namespace growset
