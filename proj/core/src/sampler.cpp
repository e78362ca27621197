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

#include "growset/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "growset/errors.hpp"

namespace growset {

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::static_selection:
      return "static";
    case Phase::diversity:
      return "diversity";
    case Phase::generalization:
      return "generalization";
  }
  return "?";
}

Phase phase_from_name(const std::string& name) {
  if (name == "static") {
    return Phase::static_selection;
  }
  if (name == "diversity") {
    return Phase::diversity;
  }
  if (name == "generalization") {
    return Phase::generalization;
  }
  throw MalformedLine("unknown phase name: " + name);
}

namespace {

/// Weighted sampling without replacement via exponential keys: item i gets
/// key -log(u_i)/w_i and the `target` smallest keys win. One uniform draw
/// is consumed per item regardless of weight, so the stream advances the
/// same way for any weight vector of the same length.
std::vector<std::uint64_t> weighted_sample(std::span<const double> weights,
                                           std::size_t target,
                                           RngStream& rng) {
  struct Keyed {
    double key;
    std::uint64_t ordinal;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double u = rng.uniform01();
    if (weights[i] > 0.0) {
      keyed.push_back({-std::log(u) / weights[i], i});
    }
  }
  if (target > keyed.size()) {
    throw TargetTooLarge("target " + std::to_string(target) +
                         " exceeds the " + std::to_string(keyed.size()) +
                         " records with positive weight");
  }
  std::partial_sort(keyed.begin(),
                    keyed.begin() + static_cast<std::ptrdiff_t>(target),
                    keyed.end(), [](const Keyed& a, const Keyed& b) {
                      if (a.key != b.key) {
                        return a.key < b.key;
                      }
                      return a.ordinal < b.ordinal;
                    });
  std::vector<std::uint64_t> out;
  out.reserve(target);
  for (std::size_t i = 0; i < target; ++i) {
    out.push_back(keyed[i].ordinal);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// floor with a small absorber for float accumulation error: a sum that is
/// mathematically integral must not land one below.
std::size_t floor_count(double sum) {
  return static_cast<std::size_t>(std::floor(sum + 1e-7));
}

}  // namespace

std::vector<std::uint64_t> static_sample(std::span<const double> gains,
                                         std::size_t target, RngStream& rng) {
  return weighted_sample(gains, target, rng);
}

SamplePlan dynamic_plan(std::span<const double> gains, std::size_t epochs,
                        std::uint64_t seed) {
  double gain_sum = 0.0;
  double prime_sum = 0.0;
  std::vector<double> prime(gains.size());
  for (std::size_t i = 0; i < gains.size(); ++i) {
    gain_sum += gains[i];
    prime[i] = std::max(0.1, 1.0 - gains[i]);
    prime_sum += prime[i];
  }
  const std::size_t diversity_count = floor_count(gain_sum);
  const std::size_t generalization_count = floor_count(prime_sum);

  SamplePlan plan;
  plan.epochs.reserve(epochs);
  for (std::size_t e = 0; e < epochs; ++e) {
    RngStream rng(seed, "dynamic_epoch_" + std::to_string(e));
    EpochEntry entry;
    if (e % 2 == 0) {
      entry.phase = Phase::diversity;
      entry.ordinals = weighted_sample(gains, diversity_count, rng);
    } else {
      entry.phase = Phase::generalization;
      entry.ordinals = weighted_sample(prime, generalization_count, rng);
    }
    plan.epochs.push_back(std::move(entry));
  }
  return plan;
}

std::vector<std::uint64_t> epoch_schedule(const SamplePlan& plan,
                                          std::size_t epoch,
                                          std::uint64_t seed) {
  if (epoch >= plan.epochs.size()) {
    throw OutOfRange("epoch " + std::to_string(epoch) + " of a " +
                     std::to_string(plan.epochs.size()) + "-epoch plan");
  }
  std::vector<std::uint64_t> out = plan.epochs[epoch].ordinals;
  RngStream rng(seed, "schedule_epoch_" + std::to_string(epoch));
  rng.shuffle(out);
  return out;
}

std::string plan_to_jsonl(const SamplePlan& plan) {
  std::string out;
  for (std::size_t e = 0; e < plan.epochs.size(); ++e) {
    nlohmann::json line;
    line["epoch"] = e;
    line["phase"] = phase_name(plan.epochs[e].phase);
    line["ordinals"] = plan.epochs[e].ordinals;
    out += line.dump();
    out += '\n';
  }
  return out;
}

SamplePlan plan_from_jsonl(const std::string& text) {
  SamplePlan plan;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("phase") ||
        !j.contains("ordinals")) {
      throw MalformedLine("plan line " + std::to_string(lineno));
    }
    EpochEntry entry;
    entry.phase = phase_from_name(j["phase"].get<std::string>());
    entry.ordinals = j["ordinals"].get<std::vector<std::uint64_t>>();
    plan.epochs.push_back(std::move(entry));
  }
  return plan;
}

}  // namespace growset
