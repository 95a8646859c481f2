#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "skforge/generator.hpp"
#include "skforge/sampler.hpp"

namespace skforge {

// One artifact captures every knob of a pipeline run. Resolution order:
// defaults < config file < SKF_* environment < command-line flags.
struct PipelineConfig {
  std::string db_root;
  std::optional<std::string> tables_json;
  std::string templates_path;  // empty: built-in pack
  std::string output_path = "corpus.jsonl";
  std::string stats_path = "corpus.stats.json";
  SamplerConfig sampler;
  GenerationConfig generation;

  nlohmann::ordered_json to_json() const;
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig load_file(const std::string& path);

  // Applies SKF_-prefixed environment variables (SKF_DB_ROOT, SKF_SEED,
  // SKF_CLUSTERS_K, ...). SKF_SEED sets both the sampler and generation
  // seeds.
  void apply_env_overrides();

  void set_seed(std::uint64_t seed) {
    sampler.rng_seed = seed;
    generation.seed = seed;
  }
};

bool config_equal(const PipelineConfig& a, const PipelineConfig& b);

}  // namespace skforge
