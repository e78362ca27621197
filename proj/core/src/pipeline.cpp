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

#include "growset/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "growset/errors.hpp"
#include "growset/gain.hpp"
#include "growset/io/binary.hpp"

namespace growset {

namespace {
constexpr char kMagic[4] = {'G', 'S', 'C', 'P'};
constexpr std::uint16_t kVersion = 1;
}  // namespace

GrowthPipeline::GrowthPipeline(PipelineConfig cfg, RelabelHook hook)
    : cfg_(std::move(cfg)), hook_(std::move(hook)), cleaner_(cfg_.cleaner) {
  cfg_.validate();
}

void GrowthPipeline::ensure_indexes(const DataRecord& record) {
  if (cfg_.dim == 0) {
    cfg_.dim = record.primary.dim();
  }
  if (cfg_.mode == PipelineMode::multimodal && cfg_.paired_dim == 0) {
    cfg_.paired_dim = record.paired ? record.paired->dim() : cfg_.dim;
  }
  if (!primary_index_) {
    primary_index_.emplace(cfg_.dim, cfg_.hnsw, cfg_.seed, "hnsw_primary");
  }
  if (cfg_.mode == PipelineMode::multimodal && !paired_index_) {
    paired_index_.emplace(cfg_.paired_dim, cfg_.hnsw, cfg_.seed,
                          "hnsw_paired");
  }
}

std::vector<double> GrowthPipeline::distances_of(
    const std::vector<ann::Neighbor>& neighbors) const {
  std::vector<double> out;
  out.reserve(neighbors.size());
  for (const auto& n : neighbors) {
    out.push_back(n.distance);
  }
  return out;
}

StepResult GrowthPipeline::step(const DataRecord& record) {
  ++counters_.seen;
  try {
    return step_impl(record);
  } catch (const Error& e) {
    ++counters_.rejected;
    rejected_log_.push_back({record.id, e.what(), 0.0});
    StepResult r;
    r.reason = e.what();
    return r;
  }
}

StepResult GrowthPipeline::step_impl(const DataRecord& record) {
  DataRecord rec = record;
  rec.primary = normalize(rec.primary);
  if (rec.paired) {
    rec.paired = normalize(*rec.paired);
  }
  if (cfg_.dim != 0 && rec.primary.dim() != cfg_.dim) {
    throw DimMismatch("record " + rec.id + ": primary dim " +
                      std::to_string(rec.primary.dim()) + " vs run dim " +
                      std::to_string(cfg_.dim));
  }
  if (cfg_.mode == PipelineMode::multimodal) {
    if (!rec.paired) {
      throw MissingPair("record " + rec.id +
                        " has no paired embedding in multimodal mode");
    }
    if (cfg_.paired_dim != 0 && rec.paired->dim() != cfg_.paired_dim) {
      throw DimMismatch("record " + rec.id + ": paired dim " +
                        std::to_string(rec.paired->dim()) + " vs run dim " +
                        std::to_string(cfg_.paired_dim));
    }
  }
  if (cfg_.mode == PipelineMode::classification && !rec.label) {
    throw MissingPair("record " + rec.id +
                      " has no label in classification mode");
  }
  ensure_indexes(rec);

  // Clean first (Alg. order): a rejected record never touches the indexes.
  bool relabeled = false;
  if (cfg_.mode == PipelineMode::multimodal) {
    Cleaner::Outcome outcome = cleaner_.clean(rec, score_pair, hook_);
    if (!outcome.passed) {
      ++counters_.rejected;
      rejected_log_.push_back({rec.id, outcome.reason, outcome.score});
      StepResult r;
      r.reason = outcome.reason;
      return r;
    }
    rec = std::move(outcome.record);
    relabeled = outcome.relabeled;
  } else if (cfg_.mode == PipelineMode::classification &&
             primary_index_->size() > 0) {
    const auto scorer = [this](const DataRecord& d) {
      return classify_score(d, *primary_index_, labels_, cfg_.k);
    };
    RelabelHook hook = hook_;
    if (!hook) {
      // Reference relabeler: majority label of the k nearest clean
      // neighbors.
      hook = [this](const DataRecord& d) -> std::optional<RelabelResult> {
        const auto neighbors = primary_index_->query(d.primary, cfg_.k);
        std::map<std::int32_t, std::size_t> votes;
        for (const auto& n : neighbors) {
          ++votes[labels_[n.ordinal]];
        }
        std::int32_t best = 0;
        std::size_t best_count = 0;
        for (const auto& [label, count] : votes) {
          if (count > best_count) {
            best = label;
            best_count = count;
          }
        }
        RelabelResult res;
        res.label = best;
        return res;
      };
    }
    Cleaner::Outcome outcome = cleaner_.clean(rec, scorer, hook);
    if (!outcome.passed) {
      ++counters_.rejected;
      rejected_log_.push_back({rec.id, outcome.reason, outcome.score});
      StepResult r;
      r.reason = outcome.reason;
      return r;
    }
    rec = std::move(outcome.record);
    relabeled = outcome.relabeled;
  }
  // Unconditioned mode has no condition to clean against; an empty clean
  // set in classification mode admits the record unfiltered (warmup).

  // Gain is computed before the record's own embedding is inserted, so a
  // record is never its own neighbor.
  double gain = 1.0;  // cold start: an empty index means maximal novelty
  if (primary_index_->size() > 0) {
    GainParts parts;
    parts.primary_distances =
        distances_of(primary_index_->query(rec.primary, cfg_.k));
    const GainComposition comp = cfg_.resolved_composition();
    if (comp == GainComposition::image_text_average) {
      parts.paired_distances =
          distances_of(paired_index_->query(*rec.paired, cfg_.k));
    } else if (comp == GainComposition::info_entropy_average) {
      const auto neighbors = primary_index_->query(rec.primary, cfg_.k);
      std::vector<std::int32_t> neighbor_labels;
      neighbor_labels.reserve(neighbors.size());
      for (const auto& n : neighbors) {
        neighbor_labels.push_back(labels_[n.ordinal]);
      }
      parts.entropy = entropy_gain(*rec.label, neighbor_labels);
    } else if (comp == GainComposition::info_alignment) {
      parts.alignment = alignment_gain(rec.primary, *rec.paired);
    }
    gain = compose_gain(parts, cfg_.mean_mode, comp);
  }

  const std::uint64_t ordinal = manifest_.size();
  GainAnnotatedRecord entry;
  entry.record = rec;
  entry.gain = gain;
  entry.ordinal = ordinal;
  entry.relabeled = relabeled;
  manifest_.push_back(std::move(entry));
  primary_index_->insert(rec.primary, ordinal);
  if (cfg_.mode == PipelineMode::multimodal) {
    paired_index_->insert(*rec.paired, ordinal);
  }
  if (cfg_.mode == PipelineMode::classification) {
    labels_.push_back(*rec.label);
  }
  ++counters_.admitted;
  if (relabeled) {
    ++counters_.relabeled;
  }

  StepResult result;
  result.admitted = true;
  result.gain = gain;
  result.relabeled = relabeled;
  return result;
}

void GrowthPipeline::grow(
    const std::function<std::optional<DataRecord>()>& next,
    const std::function<void(std::uint64_t)>& progress) {
  while (std::optional<DataRecord> record = next()) {
    step(*record);
    if (progress && cfg_.progress_interval > 0 &&
        counters_.seen % cfg_.progress_interval == 0) {
      progress(counters_.seen);
    }
  }
}

void GrowthPipeline::grow(const std::vector<DataRecord>& records) {
  for (const DataRecord& r : records) {
    step(r);
  }
}

PipelineStats GrowthPipeline::stats() const {
  PipelineStats s;
  s.counters = counters_;
  for (const GainAnnotatedRecord& r : manifest_) {
    const auto bin = std::min<std::size_t>(
        19, static_cast<std::size_t>(std::floor(r.gain * 20.0)));
    ++s.gain_histogram[bin];
  }
  s.delta_threshold = cleaner_.threshold();
  s.primary_index_size = primary_index_ ? primary_index_->size() : 0;
  s.paired_index_size = paired_index_ ? paired_index_->size() : 0;
  return s;
}

std::string GrowthPipeline::checkpoint() const {
  io::ByteWriter w;
  w.bytes(kMagic, 4);
  w.u16(kVersion);
  // config section
  w.u8(static_cast<std::uint8_t>(cfg_.mode));
  w.u64(cfg_.dim);
  w.u64(cfg_.paired_dim);
  w.u64(cfg_.k);
  w.u8(static_cast<std::uint8_t>(cfg_.mean_mode));
  w.u8(cfg_.composition ? 1 : 0);
  w.u8(cfg_.composition ? static_cast<std::uint8_t>(*cfg_.composition) : 0);
  w.u8(static_cast<std::uint8_t>(cfg_.cleaner.delta_mode));
  w.f64(cfg_.cleaner.delta);
  w.f64(cfg_.cleaner.z);
  w.u64(cfg_.cleaner.warmup);
  w.u32(cfg_.hnsw.M);
  w.u32(cfg_.hnsw.ef_construction);
  w.u32(cfg_.hnsw.ef_search);
  w.u64(cfg_.seed);
  w.u64(cfg_.progress_interval);
  // counters
  w.u64(counters_.seen);
  w.u64(counters_.admitted);
  w.u64(counters_.rejected);
  w.u64(counters_.relabeled);
  // cleaner stats
  const OnlineStats& st = cleaner_.stats();
  w.u64(st.count);
  w.f64(st.mean);
  w.f64(st.m2);
  // labels
  w.u64(labels_.size());
  for (std::int32_t l : labels_) {
    w.i32(l);
  }
  // manifest
  w.u64(manifest_.size());
  for (const GainAnnotatedRecord& r : manifest_) {
    w.str(r.record.id);
    w.u32(static_cast<std::uint32_t>(r.record.primary.dim()));
    for (float x : r.record.primary.values) {
      w.f32(x);
    }
    w.u8(r.record.paired ? 1 : 0);
    if (r.record.paired) {
      w.u32(static_cast<std::uint32_t>(r.record.paired->dim()));
      for (float x : r.record.paired->values) {
        w.f32(x);
      }
    }
    w.u8(r.record.label ? 1 : 0);
    if (r.record.label) {
      w.i32(*r.record.label);
    }
    w.u8(r.record.payload_ref ? 1 : 0);
    if (r.record.payload_ref) {
      w.str(*r.record.payload_ref);
    }
    w.f64(r.gain);
    w.u64(r.ordinal);
    w.u8(r.relabeled ? 1 : 0);
  }
  // rejected sidecar
  w.u64(rejected_log_.size());
  for (const RejectedEntry& r : rejected_log_) {
    w.str(r.id);
    w.str(r.reason);
    w.f64(r.score);
  }
  // index snapshots (each carries its own RNG cursor)
  w.u8(primary_index_ ? 1 : 0);
  if (primary_index_) {
    w.str(primary_index_->snapshot());
  }
  w.u8(paired_index_ ? 1 : 0);
  if (paired_index_) {
    w.str(paired_index_->snapshot());
  }
  std::string body = w.take();
  io::ByteWriter crc;
  crc.u32(io::crc32_of(body));
  return body + crc.data();
}

GrowthPipeline GrowthPipeline::resume(std::string_view bytes,
                                      RelabelHook hook) {
  if (bytes.size() < 10) {
    throw CorruptCheckpoint("checkpoint too short");
  }
  const std::string_view body = bytes.substr(0, bytes.size() - 4);
  io::ByteReader crc_reader(bytes.substr(bytes.size() - 4));
  if (crc_reader.u32() != io::crc32_of(body)) {
    throw CorruptCheckpoint("checksum mismatch");
  }
  try {
    io::ByteReader r(body);
    if (r.raw(4) != std::string_view(kMagic, 4)) {
      throw CorruptCheckpoint("bad magic");
    }
    if (r.u16() != kVersion) {
      throw CorruptCheckpoint("unsupported version");
    }
    PipelineConfig cfg;
    cfg.mode = static_cast<PipelineMode>(r.u8());
    cfg.dim = r.u64();
    cfg.paired_dim = r.u64();
    cfg.k = r.u64();
    cfg.mean_mode = static_cast<MeanMode>(r.u8());
    const bool has_comp = r.u8() != 0;
    const std::uint8_t comp = r.u8();
    if (has_comp) {
      cfg.composition = static_cast<GainComposition>(comp);
    }
    cfg.cleaner.delta_mode = static_cast<DeltaMode>(r.u8());
    cfg.cleaner.delta = r.f64();
    cfg.cleaner.z = r.f64();
    cfg.cleaner.warmup = r.u64();
    cfg.hnsw.M = r.u32();
    cfg.hnsw.ef_construction = r.u32();
    cfg.hnsw.ef_search = r.u32();
    cfg.seed = r.u64();
    cfg.progress_interval = r.u64();

    GrowthPipeline p(cfg, std::move(hook));
    p.counters_.seen = r.u64();
    p.counters_.admitted = r.u64();
    p.counters_.rejected = r.u64();
    p.counters_.relabeled = r.u64();
    OnlineStats st;
    st.count = r.u64();
    st.mean = r.f64();
    st.m2 = r.f64();
    p.cleaner_.restore_stats(st);

    const std::uint64_t label_count = r.u64();
    p.labels_.reserve(label_count);
    for (std::uint64_t i = 0; i < label_count; ++i) {
      p.labels_.push_back(r.i32());
    }
    const std::uint64_t manifest_count = r.u64();
    p.manifest_.reserve(manifest_count);
    for (std::uint64_t i = 0; i < manifest_count; ++i) {
      GainAnnotatedRecord entry;
      entry.record.id = r.str();
      const std::uint32_t dim = r.u32();
      entry.record.primary.values.resize(dim);
      for (std::uint32_t j = 0; j < dim; ++j) {
        entry.record.primary.values[j] = r.f32();
      }
      if (r.u8() != 0) {
        const std::uint32_t pdim = r.u32();
        EmbeddingVector v;
        v.values.resize(pdim);
        for (std::uint32_t j = 0; j < pdim; ++j) {
          v.values[j] = r.f32();
        }
        entry.record.paired = std::move(v);
      }
      if (r.u8() != 0) {
        entry.record.label = r.i32();
      }
      if (r.u8() != 0) {
        entry.record.payload_ref = r.str();
      }
      entry.gain = r.f64();
      entry.ordinal = r.u64();
      entry.relabeled = r.u8() != 0;
      p.manifest_.push_back(std::move(entry));
    }
    const std::uint64_t rejected_count = r.u64();
    p.rejected_log_.reserve(rejected_count);
    for (std::uint64_t i = 0; i < rejected_count; ++i) {
      RejectedEntry e;
      e.id = r.str();
      e.reason = r.str();
      e.score = r.f64();
      p.rejected_log_.push_back(std::move(e));
    }
    if (r.u8() != 0) {
      p.primary_index_ = ann::HnswIndex::restore(r.str());
    }
    if (r.u8() != 0) {
      p.paired_index_ = ann::HnswIndex::restore(r.str());
    }
    if (!r.at_end()) {
      throw CorruptCheckpoint("trailing bytes in checkpoint");
    }
    return p;
  } catch (const TruncatedRecord& e) {
    throw CorruptCheckpoint(e.what());
  } catch (const CorruptSnapshot& e) {
    throw CorruptCheckpoint(e.what());
  }
}

}  // namespace growset
