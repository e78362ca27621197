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

#include "growset/ann/hnsw.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "growset/errors.hpp"
#include "growset/io/binary.hpp"

namespace growset::ann {

namespace {
constexpr char kMagic[4] = {'G', 'S', 'N', 'N'};
constexpr std::uint16_t kVersion = 1;
}  // namespace

HnswIndex::HnswIndex(std::size_t dim, HnswParams params, std::uint64_t seed,
                     std::string_view stream_label)
    : dim_(dim),
      params_(params),
      level_mult_(1.0 / std::log(static_cast<double>(params.M))),
      rng_(seed, stream_label) {
  if (params_.M < 2) {
    throw BadConfig("hnsw M must be >= 2");
  }
}

double HnswIndex::distance_to(std::uint32_t id,
                              const EmbeddingVector& v) const {
  return cosine_distance(nodes_[id].vec, v);
}

bool HnswIndex::closer(const Candidate& a, const Candidate& b) const {
  if (a.distance != b.distance) {
    return a.distance < b.distance;
  }
  return nodes_[a.id].ordinal < nodes_[b.id].ordinal;
}

std::uint32_t HnswIndex::greedy_descend(const EmbeddingVector& v,
                                        std::uint32_t start,
                                        std::int32_t from_level,
                                        std::int32_t to_level) const {
  std::uint32_t cur = start;
  double cur_dist = distance_to(cur, v);
  for (std::int32_t level = from_level; level >= to_level; --level) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::uint32_t nb :
           nodes_[cur].neighbors[static_cast<std::size_t>(level)]) {
        const double d = distance_to(nb, v);
        if (d < cur_dist) {
          cur_dist = d;
          cur = nb;
          improved = true;
        }
      }
    }
  }
  return cur;
}

std::vector<HnswIndex::Candidate> HnswIndex::search_layer(
    const EmbeddingVector& v, std::uint32_t entry, std::size_t ef,
    std::int32_t level) const {
  const auto worse = [this](const Candidate& a, const Candidate& b) {
    return closer(b, a);
  };
  const auto better = [this](const Candidate& a, const Candidate& b) {
    return closer(a, b);
  };
  // candidates: closest on top; results: furthest on top.
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(worse)>
      candidates(worse);
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(better)>
      results(better);
  std::vector<char> visited(nodes_.size(), 0);

  const Candidate start{distance_to(entry, v), entry};
  visited[entry] = 1;
  candidates.push(start);
  results.push(start);

  while (!candidates.empty()) {
    const Candidate c = candidates.top();
    if (results.size() >= ef && closer(results.top(), c)) {
      break;
    }
    candidates.pop();
    for (std::uint32_t nb :
         nodes_[c.id].neighbors[static_cast<std::size_t>(level)]) {
      if (visited[nb]) {
        continue;
      }
      visited[nb] = 1;
      const Candidate e{distance_to(nb, v), nb};
      if (results.size() < ef || closer(e, results.top())) {
        candidates.push(e);
        results.push(e);
        if (results.size() > ef) {
          results.pop();
        }
      }
    }
  }

  std::vector<Candidate> out;
  out.reserve(results.size());
  while (!results.empty()) {
    out.push_back(results.top());
    results.pop();
  }
  std::reverse(out.begin(), out.end());  // ascending by (distance, ordinal)
  return out;
}

std::vector<std::uint32_t> HnswIndex::select_neighbors(
    std::vector<Candidate> candidates, std::size_t max_count,
    std::vector<std::uint32_t>* pruned) const {
  std::sort(candidates.begin(), candidates.end(),
            [this](const Candidate& a, const Candidate& b) {
              return closer(a, b);
            });
  std::vector<std::uint32_t> selected;
  std::vector<std::uint32_t> dropped;
  for (const Candidate& c : candidates) {
    if (selected.size() >= max_count) {
      dropped.push_back(c.id);
      continue;
    }
    bool keep = true;
    for (std::uint32_t s : selected) {
      if (cosine_distance(nodes_[c.id].vec, nodes_[s].vec) < c.distance) {
        keep = false;
        break;
      }
    }
    if (keep) {
      selected.push_back(c.id);
    } else {
      dropped.push_back(c.id);
    }
  }
  // keep-pruned: refill from the dropped list, closest first.
  while (selected.size() < max_count && !dropped.empty()) {
    selected.push_back(dropped.front());
    dropped.erase(dropped.begin());
  }
  if (pruned != nullptr) {
    *pruned = std::move(dropped);
  }
  return selected;
}

void HnswIndex::shrink_neighbors(std::uint32_t id, std::int32_t level) {
  auto& list = nodes_[id].neighbors[static_cast<std::size_t>(level)];
  if (list.size() <= max_degree(level)) {
    return;
  }
  std::vector<Candidate> candidates;
  candidates.reserve(list.size());
  for (std::uint32_t nb : list) {
    candidates.push_back(
        {cosine_distance(nodes_[id].vec, nodes_[nb].vec), nb});
  }
  std::vector<std::uint32_t> dropped;
  std::vector<std::uint32_t> keep =
      select_neighbors(std::move(candidates), max_degree(level), &dropped);
  list = std::move(keep);
  // Remove the reverse edge of every dropped link so the level stays
  // symmetric.
  for (std::uint32_t d : dropped) {
    auto& other = nodes_[d].neighbors[static_cast<std::size_t>(level)];
    std::erase(other, id);
  }
}

std::uint32_t HnswIndex::insert(const EmbeddingVector& v,
                                std::uint64_t ordinal) {
  if (v.dim() != dim_) {
    throw DimMismatch("hnsw insert: dim " + std::to_string(v.dim()) +
                      " vs index dim " + std::to_string(dim_));
  }
  const double u = rng_.uniform01();
  const auto level =
      static_cast<std::uint32_t>(std::floor(-std::log(u) * level_mult_));

  Node node;
  node.ordinal = ordinal;
  node.level = level;
  node.vec = v;
  node.neighbors.resize(level + 1);

  const auto id = static_cast<std::uint32_t>(nodes_.size());
  if (entry_ < 0) {
    nodes_.push_back(std::move(node));
    entry_ = id;
    top_level_ = static_cast<std::int32_t>(level);
    return id;
  }

  std::uint32_t ep = static_cast<std::uint32_t>(entry_);
  const auto new_level = static_cast<std::int32_t>(level);
  if (new_level < top_level_) {
    ep = greedy_descend(v, ep, top_level_, new_level + 1);
  }
  for (std::int32_t lc = std::min(new_level, top_level_); lc >= 0; --lc) {
    std::vector<Candidate> found =
        search_layer(v, ep, params_.ef_construction, lc);
    ep = found.front().id;
    node.neighbors[static_cast<std::size_t>(lc)] =
        select_neighbors(std::move(found), params_.M);
  }

  nodes_.push_back(std::move(node));
  for (std::int32_t lc = std::min(new_level, top_level_); lc >= 0; --lc) {
    // Copy: shrinking a neighbor can drop its edge back to id, which erases
    // from the very list being walked.
    const std::vector<std::uint32_t> targets =
        nodes_[id].neighbors[static_cast<std::size_t>(lc)];
    for (std::uint32_t nb : targets) {
      nodes_[nb].neighbors[static_cast<std::size_t>(lc)].push_back(id);
      shrink_neighbors(nb, lc);
    }
  }
  if (new_level > top_level_) {
    top_level_ = new_level;
    entry_ = id;
  }
  return id;
}

std::vector<Neighbor> HnswIndex::query(const EmbeddingVector& v,
                                       std::size_t k) const {
  if (v.dim() != dim_) {
    throw DimMismatch("hnsw query: dim " + std::to_string(v.dim()) +
                      " vs index dim " + std::to_string(dim_));
  }
  if (nodes_.empty() || k == 0) {
    return {};
  }
  std::uint32_t ep = static_cast<std::uint32_t>(entry_);
  if (top_level_ > 0) {
    ep = greedy_descend(v, ep, top_level_, 1);
  }
  const std::size_t ef = std::max<std::size_t>(params_.ef_search, k);
  std::vector<Candidate> found = search_layer(v, ep, ef, 0);
  if (found.size() > k) {
    found.resize(k);
  }
  std::vector<Neighbor> out;
  out.reserve(found.size());
  for (const Candidate& c : found) {
    out.push_back({nodes_[c.id].ordinal, c.distance});
  }
  return out;
}

std::string HnswIndex::snapshot() const {
  io::ByteWriter w;
  w.bytes(kMagic, 4);
  w.u16(kVersion);
  w.u32(static_cast<std::uint32_t>(dim_));
  w.u64(nodes_.size());
  w.u32(params_.M);
  w.u32(params_.ef_construction);
  w.u32(params_.ef_search);
  w.i32(top_level_);
  w.i64(entry_);
  w.str(rng_.save_state());
  for (const Node& n : nodes_) {
    w.u64(n.ordinal);
    w.u32(n.level);
    for (float x : n.vec.values) {
      w.f32(x);
    }
    for (const auto& list : n.neighbors) {
      w.u32(static_cast<std::uint32_t>(list.size()));
      for (std::uint32_t nb : list) {
        w.u32(nb);
      }
    }
  }
  std::string body = w.take();
  io::ByteWriter crc;
  crc.u32(io::crc32_of(body));
  return body + crc.data();
}

HnswIndex HnswIndex::restore(std::string_view bytes) {
  if (bytes.size() < 10) {
    throw CorruptSnapshot("snapshot too short");
  }
  const std::string_view body = bytes.substr(0, bytes.size() - 4);
  io::ByteReader crc_reader(bytes.substr(bytes.size() - 4));
  if (crc_reader.u32() != io::crc32_of(body)) {
    throw CorruptSnapshot("checksum mismatch");
  }
  try {
    io::ByteReader r(body);
    if (r.raw(4) != std::string_view(kMagic, 4)) {
      throw CorruptSnapshot("bad magic");
    }
    if (r.u16() != kVersion) {
      throw CorruptSnapshot("unsupported version");
    }
    const std::uint32_t dim = r.u32();
    const std::uint64_t count = r.u64();
    HnswParams params;
    params.M = r.u32();
    params.ef_construction = r.u32();
    params.ef_search = r.u32();
    HnswIndex index(dim, params, 0);
    index.top_level_ = r.i32();
    index.entry_ = r.i64();
    index.rng_.restore_state(r.str());
    index.nodes_.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      Node n;
      n.ordinal = r.u64();
      n.level = r.u32();
      n.vec.values.resize(dim);
      for (std::uint32_t j = 0; j < dim; ++j) {
        n.vec.values[j] = r.f32();
      }
      n.neighbors.resize(n.level + 1);
      for (auto& list : n.neighbors) {
        const std::uint32_t sz = r.u32();
        if (sz > count) {
          throw CorruptSnapshot("implausible adjacency size");
        }
        list.resize(sz);
        for (std::uint32_t& nb : list) {
          nb = r.u32();
          if (nb >= count) {
            throw CorruptSnapshot("adjacency id out of range");
          }
        }
      }
      index.nodes_.push_back(std::move(n));
    }
    if (!r.at_end()) {
      throw CorruptSnapshot("trailing bytes in snapshot");
    }
    return index;
  } catch (const TruncatedRecord& e) {
    throw CorruptSnapshot(e.what());
  }
}

void HnswIndex::validate() const {
  if (nodes_.empty()) {
    if (entry_ != -1 || top_level_ != -1) {
      throw Error("InvariantViolation", "empty index with an entry point");
    }
    return;
  }
  std::int32_t max_level = -1;
  for (const Node& n : nodes_) {
    max_level = std::max(max_level, static_cast<std::int32_t>(n.level));
  }
  if (top_level_ != max_level ||
      nodes_[static_cast<std::size_t>(entry_)].level !=
          static_cast<std::uint32_t>(top_level_)) {
    throw Error("InvariantViolation", "entry point is not of maximal level");
  }
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    if (n.neighbors.size() != n.level + 1) {
      throw Error("InvariantViolation", "adjacency lists missing for levels");
    }
    for (std::size_t l = 0; l < n.neighbors.size(); ++l) {
      const auto& list = n.neighbors[l];
      if (list.size() > max_degree(static_cast<std::int32_t>(l))) {
        throw Error("InvariantViolation",
                    "degree cap exceeded at level " + std::to_string(l));
      }
      for (std::uint32_t nb : list) {
        if (nb >= nodes_.size() || nb == id) {
          throw Error("InvariantViolation", "bad neighbor id");
        }
        const Node& other = nodes_[nb];
        if (other.level < l) {
          throw Error("InvariantViolation",
                      "neighbor not present at this level");
        }
        const auto& back = other.neighbors[l];
        if (std::find(back.begin(), back.end(),
                      static_cast<std::uint32_t>(id)) == back.end()) {
          throw Error("InvariantViolation",
                      "asymmetric adjacency at level " + std::to_string(l));
        }
      }
    }
  }
}

}  // namespace growset::ann
