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
#include <cmath>
#include <numeric>
#include <vector>

#include "growset/errors.hpp"
#include "growset/io/manifest.hpp"
#include "growset/pipeline.hpp"
#include "growset/synth.hpp"

#include "util.hpp"

using namespace growset;

namespace {

PipelineConfig multimodal_config(std::size_t dim) {
  PipelineConfig cfg;
  cfg.mode = PipelineMode::multimodal;
  cfg.dim = dim;
  cfg.paired_dim = dim;
  cfg.seed = 2;
  cfg.validate();
  return cfg;
}

DataRecord clean_pair(const std::string& id, const EmbeddingVector& v) {
  DataRecord r;
  r.id = id;
  r.primary = v;
  r.paired = v;
  return r;
}

}  // namespace

TEST_CASE("first record of a run is admitted with gain 1.0") {
  GrowthPipeline pipeline(multimodal_config(8));
  RngStream rng(1, "first");
  const auto result = pipeline.step(clean_pair("a", test::random_unit(rng, 8)));
  CHECK(result.admitted);
  CHECK(result.gain == 1.0);
  CHECK(pipeline.manifest().size() == 1);
  CHECK(pipeline.manifest()[0].ordinal == 0);
}

TEST_CASE("exact duplicate gets gain exactly 0") {
  GrowthPipeline pipeline(multimodal_config(8));
  RngStream rng(2, "dup");
  const EmbeddingVector v = test::random_unit(rng, 8);
  pipeline.step(clean_pair("a", v));
  const auto second = pipeline.step(clean_pair("a_again", v));
  CHECK(second.admitted);
  CHECK(second.gain == 0.0);
}

TEST_CASE("mismatched pair is rejected and leaves no trace in the index") {
  GrowthPipeline pipeline(multimodal_config(4));
  DataRecord bad;
  bad.id = "noise";
  bad.primary = normalize(std::vector<float>{1, 0, 0, 0});
  bad.paired = normalize(std::vector<float>{0, 1, 0, 0});
  const auto result = pipeline.step(bad);
  CHECK_FALSE(result.admitted);
  CHECK(pipeline.manifest().empty());
  CHECK(pipeline.stats().primary_index_size == 0);
  REQUIRE(pipeline.rejected_log().size() == 1);
  CHECK(pipeline.rejected_log()[0].id == "noise");
}

TEST_CASE("counters: seen == admitted + rejected, histogram mass == admitted") {
  SynthSpec spec;
  spec.clusters = 2;
  spec.dim = 16;
  spec.points_per_cluster = 150;
  spec.noise_fraction = 0.2;
  spec.seed = 5;
  const SynthResult data = synthesize(spec);

  PipelineConfig cfg = multimodal_config(16);
  cfg.cleaner.delta = 0.5;
  GrowthPipeline pipeline(cfg);
  pipeline.grow(data.records);

  const PipelineStats stats = pipeline.stats();
  CHECK(stats.counters.seen == data.records.size());
  CHECK(stats.counters.seen ==
        stats.counters.admitted + stats.counters.rejected);
  CHECK(stats.counters.admitted == pipeline.manifest().size());
  CHECK(stats.primary_index_size == stats.counters.admitted);
  CHECK(stats.paired_index_size == stats.counters.admitted);
  const std::uint64_t mass = std::accumulate(stats.gain_histogram.begin(),
                                             stats.gain_histogram.end(),
                                             std::uint64_t{0});
  CHECK(mass == stats.counters.admitted);
}

TEST_CASE("gain decay: late deciles score below early deciles") {
  SynthSpec spec;
  spec.clusters = 4;
  spec.dim = 16;
  spec.points_per_cluster = 250;
  spec.mode = PipelineMode::unconditioned;
  spec.seed = 11;
  const SynthResult data = synthesize(spec);

  PipelineConfig cfg;
  cfg.mode = PipelineMode::unconditioned;
  cfg.dim = 16;
  cfg.seed = 11;
  cfg.validate();
  GrowthPipeline pipeline(cfg);
  pipeline.grow(data.records);

  const auto& manifest = pipeline.manifest();
  REQUIRE(manifest.size() == data.records.size());
  const std::size_t decile = manifest.size() / 10;
  double first = 0.0;
  double last = 0.0;
  for (std::size_t i = 0; i < decile; ++i) {
    first += manifest[i].gain;
    last += manifest[manifest.size() - decile + i].gain;
  }
  CHECK(last / decile < first / decile);
}

TEST_CASE("relabel hook from ground truth restores ~25% of the stream") {
  SynthSpec spec;
  spec.clusters = 2;
  spec.dim = 16;
  spec.points_per_cluster = 400;
  spec.noise_fraction = 0.25;
  spec.seed = 13;
  const SynthResult data = synthesize(spec);

  RelabelHook truth_hook =
      [&data](const DataRecord& r) -> std::optional<RelabelResult> {
    const auto it = data.true_paired.find(r.id);
    if (it == data.true_paired.end()) {
      return std::nullopt;
    }
    RelabelResult res;
    res.paired = it->second;
    return res;
  };

  PipelineConfig cfg = multimodal_config(16);
  cfg.cleaner.delta = 0.5;
  GrowthPipeline pipeline(cfg, truth_hook);
  pipeline.grow(data.records);

  const double relabeled_fraction =
      static_cast<double>(pipeline.stats().counters.relabeled) /
      static_cast<double>(data.records.size());
  CHECK(relabeled_fraction >= 0.20);
  CHECK(relabeled_fraction <= 0.30);
}

TEST_CASE("classification: warmup record is admitted, labels are tracked") {
  PipelineConfig cfg;
  cfg.mode = PipelineMode::classification;
  cfg.dim = 8;
  cfg.seed = 3;
  cfg.validate();
  GrowthPipeline pipeline(cfg);

  RngStream rng(3, "cls");
  DataRecord r;
  r.id = "c0";
  r.primary = test::random_unit(rng, 8);
  r.label = 4;
  const auto result = pipeline.step(r);
  CHECK(result.admitted);  // empty clean set: admitted without cleaning
  CHECK(result.gain == 1.0);
  REQUIRE(pipeline.manifest().size() == 1);
  CHECK(pipeline.manifest()[0].record.label == 4);
}

TEST_CASE("record without the mode's condition is rejected, not fatal") {
  GrowthPipeline pipeline(multimodal_config(8));
  DataRecord r;
  r.id = "no_pair";
  r.primary = normalize(std::vector<float>{1, 0, 0, 0, 0, 0, 0, 0});
  const auto result = pipeline.step(r);
  CHECK_FALSE(result.admitted);
  CHECK(pipeline.stats().counters.rejected == 1);
}

TEST_CASE("checkpoint: split run equals unsplit run byte-exactly") {
  SynthSpec spec;
  spec.clusters = 3;
  spec.dim = 12;
  spec.points_per_cluster = 120;
  spec.noise_fraction = 0.1;
  spec.seed = 17;
  const SynthResult data = synthesize(spec);

  PipelineConfig cfg = multimodal_config(12);
  cfg.cleaner.delta_mode = DeltaMode::online_stats;
  cfg.seed = 17;

  GrowthPipeline whole(cfg);
  whole.grow(data.records);

  GrowthPipeline half(cfg);
  const std::size_t split = data.records.size() / 2;
  for (std::size_t i = 0; i < split; ++i) {
    half.step(data.records[i]);
  }
  const std::string bytes = half.checkpoint();
  GrowthPipeline resumed = GrowthPipeline::resume(bytes);
  for (std::size_t i = split; i < data.records.size(); ++i) {
    resumed.step(data.records[i]);
  }

  CHECK(io::manifest_to_jsonl(resumed.manifest()) ==
        io::manifest_to_jsonl(whole.manifest()));
  CHECK(resumed.checkpoint() == whole.checkpoint());
}

TEST_CASE("checkpoint: fresh state is restorable") {
  GrowthPipeline fresh(multimodal_config(8));
  GrowthPipeline back = GrowthPipeline::resume(fresh.checkpoint());
  CHECK(back.manifest().empty());
  CHECK(back.stats().counters.seen == 0);
}

TEST_CASE("checkpoint: corrupt bytes are rejected") {
  GrowthPipeline pipeline(multimodal_config(8));
  RngStream rng(19, "ck");
  for (int i = 0; i < 20; ++i) {
    pipeline.step(clean_pair("r" + std::to_string(i),
                             test::random_unit(rng, 8)));
  }
  const std::string bytes = pipeline.checkpoint();
  CHECK_THROWS_AS(GrowthPipeline::resume(bytes.substr(0, bytes.size() - 9)),
                  CorruptCheckpoint);
  std::string flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x10;
  CHECK_THROWS_AS(GrowthPipeline::resume(flipped), CorruptCheckpoint);
}

TEST_CASE("determinism: same config and stream give identical manifests") {
  SynthSpec spec;
  spec.clusters = 2;
  spec.dim = 12;
  spec.points_per_cluster = 100;
  spec.seed = 23;
  const SynthResult data = synthesize(spec);

  auto run = [&] {
    GrowthPipeline pipeline(multimodal_config(12));
    pipeline.grow(data.records);
    return io::manifest_to_jsonl(pipeline.manifest());
  };
  CHECK(run() == run());
}

TEST_CASE("dim mismatch mid-stream is a rejection with a diagnostic") {
  GrowthPipeline pipeline(multimodal_config(8));
  RngStream rng(29, "dims");
  pipeline.step(clean_pair("ok", test::random_unit(rng, 8)));
  const auto bad = pipeline.step(clean_pair("bad", test::random_unit(rng, 4)));
  CHECK_FALSE(bad.admitted);
  CHECK(bad.reason.find("DimMismatch") != std::string::npos);
  CHECK(pipeline.stats().counters.seen == 2);
}
