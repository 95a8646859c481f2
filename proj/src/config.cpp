#include "skforge/config.hpp"

#include <cstdlib>
#include <fstream>

#include "skforge/errors.hpp"

namespace skforge {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json PipelineConfig::to_json() const {
  ordered_json j;
  j["db_root"] = db_root;
  j["tables_json"] = tables_json ? ordered_json(*tables_json) : ordered_json(nullptr);
  j["templates_path"] = templates_path;
  j["output_path"] = output_path;
  j["stats_path"] = stats_path;

  ordered_json s;
  s["clusters_k"] = sampler.clusters_k;
  s["rows_per_cluster_l"] = sampler.rows_per_cluster_l;
  s["max_numeric_ratio"] = sampler.max_numeric_ratio;
  s["value_truncate_len"] = sampler.value_truncate_len;
  s["rng_seed"] = sampler.rng_seed;
  j["sampler"] = s;

  ordered_json g;
  g["seed"] = generation.seed;
  ordered_json quotas;
  for (TaskKind kind : kAllTaskKinds) {
    const auto it = generation.quotas.find(kind);
    quotas[task_kind_name(kind)] = it == generation.quotas.end() ? 0 : it->second;
  }
  g["quotas"] = quotas;
  g["objective_ratio_target"] = generation.objective_ratio_target;
  g["values_per_sample"] = generation.values_per_sample;
  g["values_per_group"] = generation.values_per_group;
  g["value_pool_size"] = generation.value_pool_size;
  g["max_columns_per_subset"] = generation.max_columns_per_subset;
  g["max_presented_items"] = generation.max_presented_items;
  g["include_colliding_values"] = generation.include_colliding_values;
  g["max_rows_per_table"] = generation.max_rows_per_table
                                ? ordered_json(*generation.max_rows_per_table)
                                : ordered_json(nullptr);
  j["generation"] = g;
  return j;
}

PipelineConfig PipelineConfig::from_json(const json& j) {
  PipelineConfig cfg;
  try {
    if (j.contains("db_root")) cfg.db_root = j.at("db_root").get<std::string>();
    if (j.contains("tables_json") && !j.at("tables_json").is_null()) {
      cfg.tables_json = j.at("tables_json").get<std::string>();
    }
    if (j.contains("templates_path")) {
      cfg.templates_path = j.at("templates_path").get<std::string>();
    }
    if (j.contains("output_path")) cfg.output_path = j.at("output_path").get<std::string>();
    if (j.contains("stats_path")) cfg.stats_path = j.at("stats_path").get<std::string>();

    if (j.contains("sampler")) {
      const auto& s = j.at("sampler");
      auto& out = cfg.sampler;
      if (s.contains("clusters_k")) out.clusters_k = s.at("clusters_k").get<std::size_t>();
      if (s.contains("rows_per_cluster_l")) {
        out.rows_per_cluster_l = s.at("rows_per_cluster_l").get<std::size_t>();
      }
      if (s.contains("max_numeric_ratio")) {
        out.max_numeric_ratio = s.at("max_numeric_ratio").get<double>();
      }
      if (s.contains("value_truncate_len")) {
        out.value_truncate_len = s.at("value_truncate_len").get<std::size_t>();
      }
      if (s.contains("rng_seed")) out.rng_seed = s.at("rng_seed").get<std::uint64_t>();
      if (out.clusters_k == 0 || out.rows_per_cluster_l == 0) {
        throw DataFormatError("sampler clusters_k and rows_per_cluster_l must be positive");
      }
      if (out.max_numeric_ratio < 0.0 || out.max_numeric_ratio > 1.0) {
        throw DataFormatError("sampler max_numeric_ratio must lie in [0, 1]");
      }
    }

    if (j.contains("generation")) {
      const auto& g = j.at("generation");
      auto& out = cfg.generation;
      if (g.contains("seed")) out.seed = g.at("seed").get<std::uint64_t>();
      if (g.contains("quotas")) {
        for (const auto& [name, value] : g.at("quotas").items()) {
          out.quotas[task_kind_from_name(name)] = value.get<std::size_t>();
        }
      }
      if (g.contains("objective_ratio_target")) {
        out.objective_ratio_target = g.at("objective_ratio_target").get<double>();
      }
      if (g.contains("values_per_sample")) {
        out.values_per_sample = g.at("values_per_sample").get<std::size_t>();
      }
      if (g.contains("values_per_group")) {
        out.values_per_group = g.at("values_per_group").get<std::size_t>();
      }
      if (g.contains("value_pool_size")) {
        out.value_pool_size = g.at("value_pool_size").get<std::size_t>();
      }
      if (g.contains("max_columns_per_subset")) {
        out.max_columns_per_subset = g.at("max_columns_per_subset").get<std::size_t>();
      }
      if (g.contains("max_presented_items")) {
        out.max_presented_items = g.at("max_presented_items").get<std::size_t>();
      }
      if (g.contains("include_colliding_values")) {
        out.include_colliding_values = g.at("include_colliding_values").get<bool>();
      }
      if (g.contains("max_rows_per_table") && !g.at("max_rows_per_table").is_null()) {
        out.max_rows_per_table = g.at("max_rows_per_table").get<std::size_t>();
      }
    }
  } catch (const json::exception& e) {
    throw DataFormatError(std::string("bad config: ") + e.what());
  }
  return cfg;
}

PipelineConfig PipelineConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataFormatError("malformed config JSON in " + path + ": " + e.what());
  }
  return from_json(j);
}

namespace {

std::optional<std::string> env_string(const char* name) {
  const char* value = std::getenv(name);
  if (!value || !*value) return std::nullopt;
  return std::string(value);
}

template <typename T>
void env_number(const char* name, T& out) {
  if (const auto s = env_string(name)) {
    try {
      if constexpr (std::is_floating_point_v<T>) {
        out = static_cast<T>(std::stod(*s));
      } else {
        out = static_cast<T>(std::stoull(*s));
      }
    } catch (const std::exception&) {
      throw DataFormatError(std::string(name) + " is not a number: " + *s);
    }
  }
}

}  // namespace

void PipelineConfig::apply_env_overrides() {
  if (const auto v = env_string("SKF_DB_ROOT")) db_root = *v;
  if (const auto v = env_string("SKF_TABLES_JSON")) tables_json = *v;
  if (const auto v = env_string("SKF_TEMPLATES_PATH")) templates_path = *v;
  if (const auto v = env_string("SKF_OUTPUT_PATH")) output_path = *v;
  if (const auto v = env_string("SKF_STATS_PATH")) stats_path = *v;
  if (const auto v = env_string("SKF_SEED")) {
    std::uint64_t seed = 0;
    env_number("SKF_SEED", seed);
    set_seed(seed);
  }
  env_number("SKF_CLUSTERS_K", sampler.clusters_k);
  env_number("SKF_ROWS_PER_CLUSTER_L", sampler.rows_per_cluster_l);
  env_number("SKF_MAX_NUMERIC_RATIO", sampler.max_numeric_ratio);
  env_number("SKF_VALUE_TRUNCATE_LEN", sampler.value_truncate_len);
  env_number("SKF_VALUES_PER_SAMPLE", generation.values_per_sample);
  env_number("SKF_VALUE_POOL_SIZE", generation.value_pool_size);
}

bool config_equal(const PipelineConfig& a, const PipelineConfig& b) {
  return a.to_json() == b.to_json();
}

}  // namespace skforge
