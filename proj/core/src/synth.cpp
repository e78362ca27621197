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

#include "growset/synth.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "growset/errors.hpp"
#include "growset/io/binary.hpp"
#include "growset/rng.hpp"

namespace growset {

namespace {

std::vector<float> gaussian_vector(RngStream& rng, std::size_t dim) {
  std::vector<float> v(dim);
  for (float& x : v) {
    x = static_cast<float>(rng.gaussian());
  }
  return v;
}

/// Random orthonormal directions via Gram-Schmidt.
std::vector<EmbeddingVector> make_centers(RngStream& rng, std::size_t count,
                                          std::size_t dim) {
  std::vector<EmbeddingVector> centers;
  centers.reserve(count);
  while (centers.size() < count) {
    std::vector<float> raw = gaussian_vector(rng, dim);
    EmbeddingVector candidate = normalize(raw);
    std::vector<double> projected(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      projected[i] = candidate.values[i];
    }
    for (const EmbeddingVector& c : centers) {
      const double proj = dot(candidate, c);
      for (std::size_t i = 0; i < dim; ++i) {
        projected[i] -= proj * c.values[i];
      }
    }
    double norm = 0.0;
    for (double x : projected) {
      norm += x * x;
    }
    if (norm < 1e-6) {
      continue;  // degenerate draw, retry
    }
    std::vector<float> ortho(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      ortho[i] = static_cast<float>(projected[i]);
    }
    centers.push_back(normalize(ortho));
  }
  return centers;
}

EmbeddingVector perturb(RngStream& rng, const EmbeddingVector& base,
                        double spread) {
  std::vector<float> v = base.values;
  for (float& x : v) {
    x += static_cast<float>(spread * rng.gaussian());
  }
  return normalize(v);
}

}  // namespace

SynthResult synthesize(const SynthSpec& spec) {
  if (spec.clusters < 1) {
    throw BadSpec("clusters must be >= 1");
  }
  if (spec.dim < spec.clusters) {
    throw BadSpec("dim must be >= clusters for orthogonal centers");
  }
  if (spec.noise_fraction < 0.0 || spec.noise_fraction > 1.0) {
    throw BadSpec("noise_fraction must be in [0, 1]");
  }
  if (spec.duplicate_fraction < 0.0 || spec.duplicate_fraction >= 1.0) {
    throw BadSpec("duplicate_fraction must be in [0, 1)");
  }
  if (spec.noise_fraction > 0.0 && spec.clusters < 2) {
    throw BadSpec("planted noise needs at least 2 clusters");
  }

  RngStream rng(spec.seed, "synth");
  const std::vector<EmbeddingVector> centers =
      make_centers(rng, spec.clusters, spec.dim);

  const std::size_t n = spec.clusters * spec.points_per_cluster;
  SynthResult result;
  result.records.reserve(n);
  std::vector<std::size_t> cluster_of;
  cluster_of.reserve(n);
  for (std::size_t c = 0; c < spec.clusters; ++c) {
    for (std::size_t i = 0; i < spec.points_per_cluster; ++i) {
      DataRecord rec;
      rec.id = "c" + std::to_string(c) + "_" + std::to_string(i);
      rec.primary = perturb(rng, centers[c], spec.spread);
      if (spec.mode == PipelineMode::multimodal) {
        rec.paired = perturb(rng, rec.primary, spec.pair_spread);
      } else if (spec.mode == PipelineMode::classification) {
        rec.label = static_cast<std::int32_t>(c);
      }
      result.records.push_back(std::move(rec));
      cluster_of.push_back(c);
    }
  }

  // Shuffle stream order (keeping cluster ids alongside).
  {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
      order[i] = i;
    }
    rng.shuffle(order);
    std::vector<DataRecord> shuffled;
    std::vector<std::size_t> shuffled_cluster;
    shuffled.reserve(n);
    shuffled_cluster.reserve(n);
    for (std::size_t i : order) {
      shuffled.push_back(std::move(result.records[i]));
      shuffled_cluster.push_back(cluster_of[i]);
    }
    result.records = std::move(shuffled);
    cluster_of = std::move(shuffled_cluster);
  }

  // Corrupt an exact-count noise subset.
  const auto noise_count = static_cast<std::size_t>(
      std::floor(spec.noise_fraction * static_cast<double>(n)));
  if (noise_count > 0) {
    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) {
      indices[i] = i;
    }
    rng.shuffle(indices);
    for (std::size_t j = 0; j < noise_count; ++j) {
      DataRecord& rec = result.records[indices[j]];
      const std::size_t own = cluster_of[indices[j]];
      const std::size_t other =
          (own + 1 + rng.below(spec.clusters - 1)) % spec.clusters;
      if (spec.mode == PipelineMode::multimodal) {
        result.true_paired[rec.id] = *rec.paired;
        rec.paired = perturb(rng, centers[other], spec.spread);
      } else if (spec.mode == PipelineMode::classification) {
        result.true_label[rec.id] = *rec.label;
        rec.label = static_cast<std::int32_t>(other);
      } else {
        throw BadSpec("noise_fraction needs multimodal or classification "
                      "mode");
      }
      result.noisy_ids.push_back(rec.id);
    }
    std::sort(result.noisy_ids.begin(), result.noisy_ids.end());
  }

  // Replace a subset of later records with copies of earlier ones.
  const auto dup_count = static_cast<std::size_t>(
      std::floor(spec.duplicate_fraction * static_cast<double>(n)));
  if (dup_count > 0 && n >= 2) {
    std::vector<std::size_t> positions(n - 1);
    for (std::size_t i = 0; i < n - 1; ++i) {
      positions[i] = i + 1;
    }
    rng.shuffle(positions);
    positions.resize(std::min(dup_count, positions.size()));
    std::sort(positions.begin(), positions.end());
    for (std::size_t pos : positions) {
      const std::size_t src = rng.below(pos);
      DataRecord copy = result.records[src];
      copy.id = "dup" + std::to_string(pos) + "_" + copy.id;
      result.records[pos] = std::move(copy);
      result.duplicate_ids.push_back(result.records[pos].id);
    }
  }
  return result;
}

SynthSpec synth_spec_from_kv(const std::map<std::string, std::string>& kv) {
  SynthSpec spec;
  for (const auto& [key, value] : kv) {
    try {
      if (key == "clusters") {
        spec.clusters = std::stoull(value);
      } else if (key == "dim") {
        spec.dim = std::stoull(value);
      } else if (key == "points_per_cluster") {
        spec.points_per_cluster = std::stoull(value);
      } else if (key == "spread") {
        spec.spread = std::stod(value);
      } else if (key == "pair_spread") {
        spec.pair_spread = std::stod(value);
      } else if (key == "noise_fraction") {
        spec.noise_fraction = std::stod(value);
      } else if (key == "duplicate_fraction") {
        spec.duplicate_fraction = std::stod(value);
      } else if (key == "seed") {
        spec.seed = std::stoull(value);
      } else if (key == "mode") {
        if (value == "multimodal") {
          spec.mode = PipelineMode::multimodal;
        } else if (value == "classification") {
          spec.mode = PipelineMode::classification;
        } else if (value == "unconditioned") {
          spec.mode = PipelineMode::unconditioned;
        } else {
          throw BadSpec("mode: unknown value '" + value + "'");
        }
      } else {
        throw BadSpec("unknown synth spec key '" + key + "'");
      }
    } catch (const BadSpec&) {
      throw;
    } catch (...) {
      throw BadSpec(key + ": cannot parse value '" + value + "'");
    }
  }
  return spec;
}

void write_truth_sidecar(const SynthResult& result, const std::string& path) {
  nlohmann::json j;
  j["noisy_ids"] = result.noisy_ids;
  j["duplicate_ids"] = result.duplicate_ids;
  nlohmann::json paired = nlohmann::json::object();
  for (const auto& [id, v] : result.true_paired) {
    paired[id] = v.values;
  }
  j["true_paired"] = std::move(paired);
  nlohmann::json labels = nlohmann::json::object();
  for (const auto& [id, l] : result.true_label) {
    labels[id] = l;
  }
  j["true_label"] = std::move(labels);
  io::write_file(path, j.dump() + "\n");
}

}  // namespace growset
