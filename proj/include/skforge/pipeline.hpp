#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skforge/config.hpp"
#include "skforge/evaluator.hpp"
#include "skforge/generator.hpp"

namespace skforge {

// Schemas for every database reachable from the config: db files found
// under db_root (db_id/db_id.sqlite or flat), merged with tables.json
// metadata when given. Metadata wins naming and structure, the live file
// wins row access. Sorted by db_id.
std::vector<DatabaseSchema> load_schemas(const std::string& db_root,
                                         const std::optional<std::string>& tables_json);

// extract: one schema dump entry per database.
nlohmann::ordered_json run_extract(const PipelineConfig& cfg);

// generate: corpus JSONL plus stats JSON, deterministic for a fixed
// config regardless of the worker count.
CorpusStats run_generate(const PipelineConfig& cfg, std::size_t jobs);

// sample: subtables and per-column value samples of one database.
nlohmann::ordered_json run_sample(const PipelineConfig& cfg, const std::string& db_id,
                                  const std::optional<std::string>& table);

// stats: recomputed corpus counts plus file-level health checks (record
// schema, template match, clustering partitions, label shape).
struct CorpusCheckReport {
  CorpusStats stats;
  std::size_t records = 0;
  std::size_t template_matched = 0;
  std::size_t unknown_template = 0;
  std::size_t partition_checked = 0;
  std::size_t partition_ok = 0;
  std::size_t label_total = 0;
  std::size_t label_wellformed = 0;
  std::size_t residual_markers = 0;

  nlohmann::ordered_json to_json() const;
};

CorpusCheckReport run_stats(const std::string& corpus_path, const TemplatePack& pack);

// evaluate: gold file is Spider JSON ({db_id, question, query} objects);
// predictions are one SQL statement per line or JSONL {index, sql}.
std::vector<EvalExample> load_eval_examples(const std::string& gold_path,
                                            const std::string& preds_path);

EvalReport run_evaluate(const std::vector<EvalExample>& examples,
                        const std::string& db_root,
                        const std::optional<std::string>& tables_json,
                        const EvalConfig& cfg);

// stats --parse: AST dump per statement of a file (one per line).
nlohmann::ordered_json parse_dump_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace skforge
