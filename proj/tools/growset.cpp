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

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "growset/ann/exact_index.hpp"
#include "growset/ann/hnsw.hpp"
#include "growset/config.hpp"
#include "growset/errors.hpp"
#include "growset/gain.hpp"
#include "growset/hook.hpp"
#include "growset/io/binary.hpp"
#include "growset/io/manifest.hpp"
#include "growset/io/stream_file.hpp"
#include "growset/pipeline.hpp"
#include "growset/sampler.hpp"
#include "growset/synth.hpp"

namespace {

using namespace growset;

// exit codes: 0 success, 1 usage, 2 data error, 3 internal
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

void apply_overrides(std::map<std::string, std::string>& kv,
                     const std::vector<std::string>& sets) {
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw BadConfig("--set expects key=value, got '" + s + "'");
    }
    kv[s.substr(0, eq)] = s.substr(eq + 1);
  }
}

std::optional<std::uint64_t> env_seed() {
  const char* env = std::getenv("GROWSET_SEED");
  if (env == nullptr || *env == '\0') {
    return std::nullopt;
  }
  try {
    return std::stoull(env);
  } catch (...) {
    throw BadConfig("GROWSET_SEED is not an unsigned integer");
  }
}

nlohmann::json stats_json(const PipelineStats& s) {
  nlohmann::json j;
  j["seen"] = s.counters.seen;
  j["admitted"] = s.counters.admitted;
  j["rejected"] = s.counters.rejected;
  j["relabeled"] = s.counters.relabeled;
  j["rejected_fraction"] =
      s.counters.seen > 0
          ? static_cast<double>(s.counters.rejected) /
                static_cast<double>(s.counters.seen)
          : 0.0;
  j["delta_threshold"] = s.delta_threshold;
  j["primary_index_size"] = s.primary_index_size;
  j["paired_index_size"] = s.paired_index_size;
  j["gain_histogram"] = s.gain_histogram;
  return j;
}

std::string mode_name(PipelineMode mode) {
  switch (mode) {
    case PipelineMode::multimodal:
      return "multimodal";
    case PipelineMode::classification:
      return "classification";
    case PipelineMode::unconditioned:
      return "unconditioned";
  }
  return "?";
}

int run_grow(const std::string& input, const std::string& config_path,
             const std::vector<std::string>& sets, const std::string& out,
             const std::string& checkpoint_path, const std::string& resume_path,
             const std::string& hook_cmd, std::optional<std::uint64_t> seed,
             bool json_stats, const std::string& rejected_out) {
  std::map<std::string, std::string> kv;
  if (!config_path.empty()) {
    kv = parse_kv_file(config_path);
  }
  apply_overrides(kv, sets);

  io::StreamReader reader(input);
  const io::StreamHeader& header = reader.header();

  RelabelHook hook;
  if (!hook_cmd.empty()) {
    hook = ExternalCommandHook(hook_cmd);
  }

  std::optional<GrowthPipeline> pipeline;
  if (!resume_path.empty()) {
    pipeline = GrowthPipeline::resume(io::read_file(resume_path), hook);
    if (pipeline->config().mode != header.mode) {
      throw BadConfig("stream mode " + mode_name(header.mode) +
                      " does not match checkpoint mode " +
                      mode_name(pipeline->config().mode));
    }
  } else {
    const bool mode_in_config = kv.count("mode") > 0;
    PipelineConfig cfg = pipeline_config_from_kv(kv);
    if (mode_in_config && cfg.mode != header.mode) {
      throw BadConfig("config mode " + mode_name(cfg.mode) +
                      " does not match stream mode " + mode_name(header.mode));
    }
    cfg.mode = header.mode;
    if (cfg.dim == 0) {
      cfg.dim = header.dim;
    }
    if (cfg.paired_dim == 0) {
      cfg.paired_dim = header.paired_dim;
    }
    if (seed) {
      cfg.seed = *seed;
    } else if (kv.count("seed") == 0) {
      if (auto es = env_seed()) {
        cfg.seed = *es;
      }
    }
    cfg.validate();
    pipeline.emplace(std::move(cfg), hook);
  }

  pipeline->grow([&reader]() { return reader.next(); },
                 [](std::uint64_t seen) {
                   std::cerr << "processed " << seen << " records\n";
                 });

  if (!out.empty()) {
    io::write_manifest(pipeline->manifest(), out);
    const std::string rejected_path =
        rejected_out.empty() ? out + ".rejected.jsonl" : rejected_out;
    std::string sidecar;
    for (const RejectedEntry& e : pipeline->rejected_log()) {
      nlohmann::json line;
      line["id"] = e.id;
      line["reason"] = e.reason;
      line["score"] = e.score;
      sidecar += line.dump();
      sidecar += '\n';
    }
    io::write_file(rejected_path, sidecar);
  }
  if (!checkpoint_path.empty()) {
    io::write_file(checkpoint_path, pipeline->checkpoint());
  }

  const nlohmann::json stats = stats_json(pipeline->stats());
  if (json_stats) {
    std::cout << stats.dump() << "\n";
  } else if (!out.empty()) {
    io::write_file(out + ".stats.json", stats.dump() + "\n");
  }
  return kExitOk;
}

int run_sample(const std::string& manifest_path, const std::string& mode,
               std::optional<std::uint64_t> target,
               std::optional<std::uint64_t> epochs, const std::string& out,
               std::optional<std::uint64_t> seed, bool json_summary) {
  const auto entries = io::read_manifest(manifest_path);
  std::vector<double> gains;
  gains.reserve(entries.size());
  for (const auto& e : entries) {
    gains.push_back(e.gain);
  }
  std::uint64_t effective_seed = 0;
  if (seed) {
    effective_seed = *seed;
  } else if (auto es = env_seed()) {
    effective_seed = *es;
  }

  SamplePlan plan;
  if (mode == "static") {
    if (!target) {
      throw BadConfig("static sampling requires --target");
    }
    RngStream rng(effective_seed, "static_sampler");
    EpochEntry entry;
    entry.phase = Phase::static_selection;
    entry.ordinals = static_sample(gains, *target, rng);
    plan.epochs.push_back(std::move(entry));
  } else if (mode == "dynamic") {
    if (!epochs) {
      throw BadConfig("dynamic sampling requires --epochs");
    }
    plan = dynamic_plan(gains, *epochs, effective_seed);
  } else {
    throw BadConfig("--mode must be static or dynamic");
  }
  io::write_file(out, plan_to_jsonl(plan));

  if (json_summary) {
    nlohmann::json j;
    j["records"] = gains.size();
    j["epochs"] = plan.epochs.size();
    std::vector<std::size_t> counts;
    for (const auto& e : plan.epochs) {
      counts.push_back(e.ordinals.size());
    }
    j["epoch_counts"] = counts;
    if (mode == "dynamic" && plan.epochs.size() >= 2 && !gains.empty()) {
      j["two_epoch_cost_ratio"] =
          static_cast<double>(plan.epochs[0].ordinals.size() +
                              plan.epochs[1].ordinals.size()) /
          (2.0 * static_cast<double>(gains.size()));
    }
    std::cout << j.dump() << "\n";
  }
  return kExitOk;
}

int run_synth(const std::string& spec_path,
              const std::vector<std::string>& sets, const std::string& out,
              std::optional<std::uint64_t> seed) {
  std::map<std::string, std::string> kv;
  if (!spec_path.empty()) {
    kv = parse_kv_file(spec_path);
  }
  apply_overrides(kv, sets);
  SynthSpec spec = synth_spec_from_kv(kv);
  if (seed) {
    spec.seed = *seed;
  } else if (kv.count("seed") == 0) {
    if (auto es = env_seed()) {
      spec.seed = *es;
    }
  }
  const SynthResult result = synthesize(spec);

  io::StreamHeader header;
  header.mode = spec.mode;
  header.dim = static_cast<std::uint32_t>(spec.dim);
  header.paired_dim =
      spec.mode == PipelineMode::multimodal
          ? static_cast<std::uint32_t>(spec.dim)
          : 0;
  io::StreamWriter writer(out, header);
  for (const DataRecord& r : result.records) {
    writer.write(r);
  }
  writer.close();
  write_truth_sidecar(result, out + ".truth.json");
  std::cerr << "wrote " << result.records.size() << " records ("
            << result.noisy_ids.size() << " noisy, "
            << result.duplicate_ids.size() << " duplicates)\n";
  return kExitOk;
}

int run_bench(const std::string& sizes_csv, std::size_t dim, std::size_t k,
              std::uint64_t seed) {
  std::vector<std::size_t> sizes;
  std::size_t pos = 0;
  while (pos < sizes_csv.size()) {
    const auto comma = sizes_csv.find(',', pos);
    const std::string tok = sizes_csv.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      sizes.push_back(std::stoull(tok));
    } catch (...) {
      throw BadConfig("--sizes: cannot parse '" + tok + "'");
    }
    if (comma == std::string::npos) {
      break;
    }
    pos = comma + 1;
  }
  if (sizes.empty()) {
    throw BadConfig("--sizes must name at least one size");
  }
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) {
      throw BadConfig("--sizes must be strictly ascending");
    }
  }

  RngStream rng(seed, "bench");
  auto random_unit = [&rng, dim]() {
    std::vector<float> v(dim);
    for (float& x : v) {
      x = static_cast<float>(rng.gaussian());
    }
    return normalize(v);
  };

  ann::HnswIndex index(dim, ann::HnswParams{}, seed);
  nlohmann::json measurements = nlohmann::json::array();
  std::vector<double> per_step_us;
  std::size_t next = 0;
  std::uint64_t ordinal = 0;
  for (std::size_t target : sizes) {
    const std::size_t window = std::min<std::size_t>(1000, target / 10 + 1);
    const std::size_t warm_until = target - window;
    while (index.size() < warm_until) {
      index.insert(random_unit(), ordinal++);
    }
    const auto t0 = std::chrono::steady_clock::now();
    while (index.size() < target) {
      const EmbeddingVector v = random_unit();
      index.query(v, k);
      index.insert(v, ordinal++);
    }
    const auto t1 = std::chrono::steady_clock::now();
    const double us =
        std::chrono::duration<double, std::micro>(t1 - t0).count() /
        static_cast<double>(window);
    per_step_us.push_back(us);
    nlohmann::json m;
    m["n"] = target;
    m["per_step_us"] = us;
    measurements.push_back(std::move(m));
    (void)next;
  }
  nlohmann::json out;
  out["dim"] = dim;
  out["k"] = k;
  out["measurements"] = std::move(measurements);
  if (per_step_us.size() >= 2) {
    out["growth_ratio"] = per_step_us.back() / per_step_us.front();
  }
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int run_oracle_check(std::size_t points, std::size_t k, std::uint64_t seed) {
  if (points < 2 * k) {
    throw BadConfig("--points must be >= 2 * --k");
  }
  bool all_pass = true;

  // Exact-index gain monotonicity: growing the reference set never raises
  // a fixed probe's gain.
  {
    const std::size_t dim = 16;
    RngStream rng(seed, "oracle_points");
    auto random_unit = [&rng, dim]() {
      std::vector<float> v(dim);
      for (float& x : v) {
        x = static_cast<float>(rng.gaussian());
      }
      return normalize(v);
    };
    std::vector<EmbeddingVector> pool;
    pool.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
      pool.push_back(random_unit());
    }
    ann::ExactIndex small(dim);
    ann::ExactIndex large(dim);
    const std::size_t subset = std::max<std::size_t>(k, points / 4);
    for (std::size_t i = 0; i < points; ++i) {
      if (i < subset) {
        small.insert(pool[i], i);
      }
      large.insert(pool[i], i);
    }
    std::size_t violations = 0;
    const std::size_t probes = 200;
    for (std::size_t p = 0; p < probes; ++p) {
      const EmbeddingVector probe = random_unit();
      for (MeanMode mode : {MeanMode::arithmetic, MeanMode::harmonic}) {
        auto gain_from = [&](const ann::ExactIndex& idx) {
          const auto neighbors = idx.query(probe, k);
          std::vector<double> d;
          for (const auto& n : neighbors) {
            d.push_back(n.distance);
          }
          return info_gain(d, mode);
        };
        if (gain_from(large) > gain_from(small) + 1e-12) {
          ++violations;
        }
      }
    }
    const bool pass = violations == 0;
    all_pass = all_pass && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " gain monotonicity: "
              << violations << " violations over " << probes
              << " probes (subset " << subset << " of " << points << ")\n";
  }

  // HNSW recall vs the brute-force oracle.
  {
    const std::size_t n = 10000;
    const std::size_t dim = 32;
    const std::size_t recall_k = 10;
    RngStream rng(seed, "oracle_recall");
    auto random_unit = [&rng, dim]() {
      std::vector<float> v(dim);
      for (float& x : v) {
        x = static_cast<float>(rng.gaussian());
      }
      return normalize(v);
    };
    ann::HnswIndex hnsw(dim, ann::HnswParams{}, seed);
    ann::ExactIndex exact(dim);
    for (std::size_t i = 0; i < n; ++i) {
      const EmbeddingVector v = random_unit();
      hnsw.insert(v, i);
      exact.insert(v, i);
    }
    std::size_t hits = 0;
    const std::size_t queries = 200;
    for (std::size_t q = 0; q < queries; ++q) {
      const EmbeddingVector probe = random_unit();
      const auto approx = hnsw.query(probe, recall_k);
      const auto truth = exact.query(probe, recall_k);
      for (const auto& t : truth) {
        for (const auto& a : approx) {
          if (a.ordinal == t.ordinal) {
            ++hits;
            break;
          }
        }
      }
    }
    const double recall =
        static_cast<double>(hits) / static_cast<double>(queries * recall_k);
    const bool pass = recall >= 0.95;
    all_pass = all_pass && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " recall@10 vs exact oracle: "
              << recall << " on " << n << " points\n";
  }

  return all_pass ? kExitOk : kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"growset: online dataset growth with cleanness and diversity "
               "awareness"};
  app.require_subcommand(1);

  // grow
  auto* grow = app.add_subcommand(
      "grow", "Run the growth pipeline over an embedding stream");
  std::string grow_input, grow_config, grow_out, grow_checkpoint,
      grow_resume, grow_hook, grow_rejected;
  std::vector<std::string> grow_sets;
  std::optional<std::uint64_t> grow_seed;
  bool grow_json = false;
  int grow_threads = 1;
  grow->add_option("--input", grow_input, "GSEB embedding stream file")
      ->required();
  grow->add_option("--config", grow_config, "key=value config file");
  grow->add_option("--set", grow_sets,
                   "config override key=value (repeatable; wins over the "
                   "config file)");
  grow->add_option("--out", grow_out, "manifest JSONL output path");
  grow->add_option("--checkpoint", grow_checkpoint,
                   "write the final checkpoint here");
  grow->add_option("--resume", grow_resume, "resume from this checkpoint");
  grow->add_option("--hook-cmd", grow_hook,
                   "external relabel hook command (JSONL on stdin/stdout)");
  grow->add_option("--seed", grow_seed,
                   "RNG seed (falls back to GROWSET_SEED)");
  grow->add_option("--rejected-out", grow_rejected,
                   "rejected-record sidecar path (default <out>.rejected.jsonl)");
  grow->add_option("--threads", grow_threads,
                   "worker cap; admission stays in input order")
      ->check(CLI::PositiveNumber);
  grow->add_flag("--json", grow_json, "print run stats as JSON on stdout");

  // sample
  auto* sample = app.add_subcommand(
      "sample", "Select training subsets from a manifest");
  std::string sample_manifest, sample_mode, sample_out;
  std::optional<std::uint64_t> sample_target, sample_epochs, sample_seed;
  bool sample_json = false;
  sample->add_option("--manifest", sample_manifest, "manifest JSONL path")
      ->required();
  sample->add_option("--mode", sample_mode, "static or dynamic")->required();
  sample->add_option("--target", sample_target,
                     "static mode: number of records to select");
  sample->add_option("--epochs", sample_epochs,
                     "dynamic mode: number of epochs to plan");
  sample->add_option("--out", sample_out, "plan JSONL output path")
      ->required();
  sample->add_option("--seed", sample_seed,
                     "RNG seed (falls back to GROWSET_SEED)");
  sample->add_flag("--json", sample_json, "print a JSON summary on stdout");

  // synth
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic cluster stream with ground truth");
  std::string synth_spec, synth_out;
  std::vector<std::string> synth_sets;
  std::optional<std::uint64_t> synth_seed;
  synth->add_option("--spec", synth_spec, "key=value synth spec file");
  synth->add_option("--set", synth_sets, "spec override key=value");
  synth->add_option("--out", synth_out, "GSEB stream output path")
      ->required();
  synth->add_option("--seed", synth_seed,
                    "RNG seed (falls back to GROWSET_SEED)");

  // bench
  auto* bench = app.add_subcommand(
      "bench", "Measure per-step (query+insert) latency growth");
  std::string bench_sizes = "10000,100000";
  std::size_t bench_dim = 32;
  std::size_t bench_k = 10;
  std::uint64_t bench_seed = 0;
  bench->add_option("--sizes", bench_sizes,
                    "comma-separated index sizes, ascending");
  bench->add_option("--dim", bench_dim, "embedding dim");
  bench->add_option("--k", bench_k, "neighbors per query");
  bench->add_option("--seed", bench_seed, "RNG seed");

  // oracle-check
  auto* oracle = app.add_subcommand(
      "oracle-check",
      "Run the exact-index monotonicity and HNSW recall checks");
  std::size_t oracle_points = 200;
  std::size_t oracle_k = 4;
  std::uint64_t oracle_seed = 0;
  oracle->add_option("--points", oracle_points, "pool size (>= 2k)");
  oracle->add_option("--k", oracle_k, "neighborhood size");
  oracle->add_option("--seed", oracle_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (grow->parsed()) {
      return run_grow(grow_input, grow_config, grow_sets, grow_out,
                      grow_checkpoint, grow_resume, grow_hook, grow_seed,
                      grow_json, grow_rejected);
    }
    if (sample->parsed()) {
      return run_sample(sample_manifest, sample_mode, sample_target,
                        sample_epochs, sample_out, sample_seed, sample_json);
    }
    if (synth->parsed()) {
      return run_synth(synth_spec, synth_sets, synth_out, synth_seed);
    }
    if (bench->parsed()) {
      return run_bench(bench_sizes, bench_dim, bench_k, bench_seed);
    }
    if (oracle->parsed()) {
      return run_oracle_check(oracle_points, oracle_k, oracle_seed);
    }
  } catch (const growset::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
