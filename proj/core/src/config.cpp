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

#include "growset/config.hpp"

#include <fstream>
#include <sstream>

#include "growset/errors.hpp"

namespace growset {

GainComposition PipelineConfig::resolved_composition() const {
  if (composition) {
    return *composition;
  }
  switch (mode) {
    case PipelineMode::multimodal:
      return GainComposition::image_text_average;
    case PipelineMode::classification:
      return GainComposition::info_entropy_average;
    case PipelineMode::unconditioned:
      return GainComposition::info_only;
  }
  return GainComposition::info_only;
}

void PipelineConfig::validate() {
  if (k < 1) {
    throw BadConfig("k must be >= 1");
  }
  if (hnsw.M < 2) {
    throw BadConfig("hnsw M must be >= 2");
  }
  if (hnsw.ef_search < k) {
    hnsw.ef_search = static_cast<std::uint32_t>(k);
  }
  if (cleaner.delta < -1.0 || cleaner.delta > 1.0) {
    throw BadConfig("delta must be in [-1, 1]");
  }
  if (cleaner.delta_mode == DeltaMode::online_stats) {
    if (cleaner.warmup < 2) {
      throw BadConfig("online_stats warmup must be >= 2");
    }
    if (cleaner.z < 0.0) {
      throw BadConfig("online_stats z must be >= 0");
    }
  }
  const GainComposition comp = resolved_composition();
  if (comp == GainComposition::image_text_average &&
      mode != PipelineMode::multimodal) {
    throw BadConfig("image_text_average requires multimodal mode");
  }
  if (comp == GainComposition::info_alignment &&
      mode != PipelineMode::multimodal) {
    throw BadConfig("info_alignment requires multimodal mode");
  }
  if (comp == GainComposition::info_entropy_average &&
      mode != PipelineMode::classification) {
    throw BadConfig("info_entropy_average requires classification mode");
  }
}

std::map<std::string, std::string> parse_kv_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw BadConfig("line " + std::to_string(lineno) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw BadConfig("cannot open config file " + path);
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_kv_text(ss.str());
}

namespace {

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    return std::stoull(v);
  } catch (...) {
    throw BadConfig(key + ": expected an unsigned integer, got '" + v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    return std::stod(v);
  } catch (...) {
    throw BadConfig(key + ": expected a number, got '" + v + "'");
  }
}

}  // namespace

PipelineConfig pipeline_config_from_kv(
    const std::map<std::string, std::string>& kv) {
  PipelineConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key == "mode") {
      if (value == "multimodal") {
        cfg.mode = PipelineMode::multimodal;
      } else if (value == "classification") {
        cfg.mode = PipelineMode::classification;
      } else if (value == "unconditioned") {
        cfg.mode = PipelineMode::unconditioned;
      } else {
        throw BadConfig("mode: unknown value '" + value + "'");
      }
    } else if (key == "k") {
      cfg.k = to_u64(key, value);
    } else if (key == "dim") {
      cfg.dim = to_u64(key, value);
    } else if (key == "paired_dim") {
      cfg.paired_dim = to_u64(key, value);
    } else if (key == "mean_mode") {
      if (value == "arithmetic") {
        cfg.mean_mode = MeanMode::arithmetic;
      } else if (value == "harmonic") {
        cfg.mean_mode = MeanMode::harmonic;
      } else {
        throw BadConfig("mean_mode: unknown value '" + value + "'");
      }
    } else if (key == "composition") {
      if (value == "info_only") {
        cfg.composition = GainComposition::info_only;
      } else if (value == "image_text_average") {
        cfg.composition = GainComposition::image_text_average;
      } else if (value == "info_entropy_average") {
        cfg.composition = GainComposition::info_entropy_average;
      } else if (value == "info_alignment") {
        cfg.composition = GainComposition::info_alignment;
      } else {
        throw BadConfig("composition: unknown value '" + value + "'");
      }
    } else if (key == "delta_mode") {
      if (value == "fixed") {
        cfg.cleaner.delta_mode = DeltaMode::fixed;
      } else if (value == "online_stats") {
        cfg.cleaner.delta_mode = DeltaMode::online_stats;
      } else {
        throw BadConfig("delta_mode: unknown value '" + value + "'");
      }
    } else if (key == "delta") {
      cfg.cleaner.delta = to_double(key, value);
    } else if (key == "z") {
      cfg.cleaner.z = to_double(key, value);
    } else if (key == "warmup") {
      cfg.cleaner.warmup = to_u64(key, value);
    } else if (key == "hnsw_m") {
      cfg.hnsw.M = static_cast<std::uint32_t>(to_u64(key, value));
    } else if (key == "hnsw_ef_construction") {
      cfg.hnsw.ef_construction = static_cast<std::uint32_t>(to_u64(key, value));
    } else if (key == "hnsw_ef_search") {
      cfg.hnsw.ef_search = static_cast<std::uint32_t>(to_u64(key, value));
    } else if (key == "seed") {
      cfg.seed = to_u64(key, value);
    } else if (key == "progress_interval") {
      cfg.progress_interval = to_u64(key, value);
    } else {
      throw BadConfig("unknown config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace growset
