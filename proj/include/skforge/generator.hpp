#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "skforge/sampler.hpp"
#include "skforge/schema.hpp"
#include "skforge/templates.hpp"

namespace skforge {

// One Alpaca-format training record plus provenance columns.
struct TaskRecord {
  std::string instruction;
  std::string input;
  std::string output;
  TaskKind task_kind = TaskKind::column_from_values;
  Objective objective = Objective::column_semantic;
  std::string db_id;
  std::string template_id;
};

// Key order is part of the file format.
nlohmann::ordered_json record_to_json(const TaskRecord& record);
TaskRecord record_from_json(const nlohmann::json& j);

// Everything needed to re-derive a record's output independently of the
// text that was rendered: the fill map, the items presented to the model,
// the ground-truth grouping, and the identities behind yes/no labels.
struct TaskProvenance {
  std::map<std::string, std::string> fills;
  std::vector<std::string> presented;
  std::vector<std::pair<std::string, std::vector<std::string>>> groups;
  std::string table;
  std::string column;            // true column, kinds 1-4
  std::string candidate_column;  // kind 3
  std::string table_b;           // kind 9
  bool label = false;            // kinds 3 and 9
};

struct GeneratedTask {
  TaskRecord record;
  TaskProvenance provenance;
};

struct GenerationConfig {
  std::uint64_t seed = 42;
  // Records per task kind per database. Defaults approximate the
  // semantic:schema objective ratio of the reference corpus (~1.778).
  std::map<TaskKind, std::size_t> quotas = default_quotas();
  double objective_ratio_target = 31924.0 / 17954.0;
  std::size_t values_per_sample = 5;   // values shown per column
  std::size_t values_per_group = 3;    // values per group in clustering kinds
  std::size_t value_pool_size = 24;    // per-column sample pool
  std::size_t max_columns_per_subset = 8;  // kind 7 subset cap
  std::size_t max_presented_items = 24;    // clustering kinds item cap
  bool include_colliding_values = false;
  std::optional<std::size_t> max_rows_per_table;

  static std::map<TaskKind, std::size_t> default_quotas();
};

// Sampled materials for one database: a subtable per table plus a value
// sample pool per column.
struct TableMaterial {
  std::string table;
  SubTable subtable;
  std::vector<ValueSample> column_samples;  // aligned with the table's columns
  std::vector<std::string> value_pool;      // distinct values across columns
};

struct DbMaterial {
  DatabaseSchema schema;
  std::vector<TableMaterial> tables;
};

using RowProvider =
    std::function<RowSet(const DatabaseSchema&, const std::string& table)>;

// Fetches rows and runs the sampler for every table of a database.
DbMaterial prepare_material(const DatabaseSchema& schema, const RowProvider& rows,
                            const SamplerConfig& sampler, const GenerationConfig& gen);

// Substitutes fills into the template; single pass, markers never remain.
TaskRecord render_record(const TaskTemplate& tpl,
                         const std::map<std::string, std::string>& fills,
                         const std::string& db_id);

// --- the nine task generators -------------------------------------------
// Each is pure: identical arguments produce identical records. The shuffle
// used by the clustering kinds is driven entirely by `shuffle_seed`.

GeneratedTask gen_col_from_values(const ValueSample& sample, const ColumnSchema& col,
                                  const std::string& table, const TaskTemplate& tpl,
                                  const std::string& db_id);

GeneratedTask gen_value_clustering_by_column(
    const std::vector<ValueSample>& samples, const std::string& table,
    const TaskTemplate& tpl, const std::string& db_id, std::uint64_t shuffle_seed);

GeneratedTask gen_value_column_membership(const ValueSample& sample,
                                          const ColumnSchema& candidate, bool label,
                                          const TaskTemplate& tpl,
                                          const std::string& db_id);

GeneratedTask gen_column_type_prediction(const ValueSample& sample,
                                         const ColumnSchema& col,
                                         const std::string& table,
                                         const TaskTemplate& tpl,
                                         const std::string& db_id);

GeneratedTask gen_table_from_row(const std::vector<Cell>& row,
                                 const std::vector<std::string>& column_order,
                                 const TableSchema& table, const TaskTemplate& tpl,
                                 const std::string& db_id);

GeneratedTask gen_value_clustering_by_table(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& per_table_values,
    const TaskTemplate& tpl, const std::string& db_id, std::uint64_t shuffle_seed);

GeneratedTask gen_table_from_columns(const std::vector<std::string>& cols,
                                     const TableSchema& table, const TaskTemplate& tpl,
                                     const std::string& db_id);

GeneratedTask gen_column_clustering_by_table(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& per_table_columns,
    const TaskTemplate& tpl, const std::string& db_id, std::uint64_t shuffle_seed);

GeneratedTask gen_join_compatibility(const TableSchema& t1, const TableSchema& t2,
                                     const std::vector<ForeignKey>& db_fks,
                                     const TaskTemplate& tpl, const std::string& db_id);

// True when an FK links the two tables directly, in either direction.
bool tables_joinable(const std::string& t1, const std::string& t2,
                     const std::vector<ForeignKey>& db_fks);

// --- corpus assembly ------------------------------------------------------

struct CorpusStats {
  std::size_t total = 0;
  std::map<std::string, std::size_t> per_objective;
  std::map<std::string, std::size_t> per_task_kind;
  std::map<std::string, std::size_t> per_db;
  std::vector<std::string> skipped_dbs;  // zero-table databases

  // semantic (objectives 1+2) : schema (objective 3); nullopt when no
  // schema records exist.
  std::optional<double> objective_ratio() const;

  nlohmann::ordered_json to_json() const;
  static CorpusStats from_json(const nlohmann::json& j);
};

using TaskSink = std::function<void(const GeneratedTask&)>;

// All records for one database, seeded by mix_seed(cfg.seed, db_id) so
// per-database streams are identical whether run serially or in parallel.
std::vector<GeneratedTask> generate_for_db(const DbMaterial& material,
                                           const TemplatePack& pack,
                                           const GenerationConfig& cfg);

// Sequential driver: databases are processed in db_id order and records
// are emitted in generation order.
CorpusStats generate_corpus(const std::vector<DbMaterial>& materials,
                            const TemplatePack& pack, const GenerationConfig& cfg,
                            const TaskSink& sink);

void accumulate_stats(CorpusStats& stats, const TaskRecord& record);

}  // namespace skforge
