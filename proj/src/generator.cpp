#include "skforge/generator.hpp"

#include <algorithm>
#include <unordered_set>

#include "skforge/errors.hpp"
#include "skforge/rng.hpp"
#include "skforge/spider.hpp"

namespace skforge {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string join(const std::vector<std::string>& items, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

using Groups = std::vector<std::pair<std::string, std::vector<std::string>>>;

// "name: v1, v2" per line; the grouping answer format for kinds 2 and 6.
std::string render_named_groups(const Groups& groups) {
  std::vector<std::string> lines;
  lines.reserve(groups.size());
  for (const auto& [name, values] : groups) {
    lines.push_back(name + ": " + join(values));
  }
  return join(lines, "\n");
}

// "c1, c2 FROM table" per line; the SQL-style format of kind 8.
std::string render_from_groups(const Groups& groups) {
  std::vector<std::string> lines;
  lines.reserve(groups.size());
  for (const auto& [table, cols] : groups) {
    lines.push_back(join(cols) + " FROM " + table);
  }
  return join(lines, "\n");
}

std::vector<std::string> shuffled_union(const Groups& groups, std::uint64_t seed) {
  std::vector<std::string> items;
  std::unordered_set<std::string> seen;
  for (const auto& [name, values] : groups) {
    for (const auto& v : values) {
      if (seen.insert(v).second) items.push_back(v);
    }
  }
  Rng rng(seed);
  rng.shuffle(items);
  return items;
}

}  // namespace

ordered_json record_to_json(const TaskRecord& record) {
  ordered_json j;
  j["instruction"] = record.instruction;
  j["input"] = record.input;
  j["output"] = record.output;
  j["task_kind"] = task_kind_name(record.task_kind);
  j["objective"] = objective_name(record.objective);
  j["db_id"] = record.db_id;
  j["template_id"] = record.template_id;
  return j;
}

TaskRecord record_from_json(const json& j) {
  TaskRecord r;
  r.instruction = j.at("instruction").get<std::string>();
  r.input = j.at("input").get<std::string>();
  r.output = j.at("output").get<std::string>();
  r.task_kind = task_kind_from_name(j.at("task_kind").get<std::string>());
  r.objective = objective_of(r.task_kind);
  const std::string objective = j.at("objective").get<std::string>();
  if (objective != objective_name(r.objective)) {
    throw DataFormatError("objective '" + objective + "' does not match task kind '" +
                          task_kind_name(r.task_kind) + "'");
  }
  r.db_id = j.at("db_id").get<std::string>();
  r.template_id = j.at("template_id").get<std::string>();
  return r;
}

TaskRecord render_record(const TaskTemplate& tpl,
                         const std::map<std::string, std::string>& fills,
                         const std::string& db_id) {
  TaskRecord record;
  record.instruction = render_template(tpl.question_text, fills);
  record.input = render_template(tpl.input_text, fills);
  record.output = render_template(tpl.answer_text, fills);
  record.task_kind = tpl.task_kind;
  record.objective = objective_of(tpl.task_kind);
  record.db_id = db_id;
  record.template_id = tpl.template_id;
  if (record.output.empty()) {
    throw DataFormatError("template '" + tpl.template_id + "' rendered an empty output");
  }
  return record;
}

GeneratedTask gen_col_from_values(const ValueSample& sample, const ColumnSchema& col,
                                  const std::string& table, const TaskTemplate& tpl,
                                  const std::string& db_id) {
  GeneratedTask task;
  task.provenance.fills = {{"values", join(sample.values)},
                           {"column", col.name},
                           {"table", table}};
  task.provenance.table = table;
  task.provenance.column = col.name;
  task.record = render_record(tpl, task.provenance.fills, db_id);
  return task;
}

GeneratedTask gen_value_clustering_by_column(
    const std::vector<ValueSample>& samples, const std::string& table,
    const TaskTemplate& tpl, const std::string& db_id, std::uint64_t shuffle_seed) {
  GeneratedTask task;
  Groups groups;
  for (const auto& sample : samples) groups.emplace_back(sample.column, sample.values);

  task.provenance.presented = shuffled_union(groups, shuffle_seed);
  task.provenance.groups = groups;
  task.provenance.table = table;
  task.provenance.fills = {{"values", join(task.provenance.presented)},
                           {"groups", render_named_groups(groups)},
                           {"table", table}};
  task.record = render_record(tpl, task.provenance.fills, db_id);
  return task;
}

GeneratedTask gen_value_column_membership(const ValueSample& sample,
                                          const ColumnSchema& candidate, bool label,
                                          const TaskTemplate& tpl,
                                          const std::string& db_id) {
  GeneratedTask task;
  task.provenance.fills = {{"values", join(sample.values)},
                           {"candidate_column", candidate.name},
                           {"label", label ? "yes" : "no"}};
  task.provenance.column = sample.column;
  task.provenance.candidate_column = candidate.name;
  task.provenance.label = label;
  task.record = render_record(tpl, task.provenance.fills, db_id);
  return task;
}

GeneratedTask gen_column_type_prediction(const ValueSample& sample,
                                         const ColumnSchema& col,
                                         const std::string& table,
                                         const TaskTemplate& tpl,
                                         const std::string& db_id) {
  GeneratedTask task;
  task.provenance.fills = {{"values", join(sample.values)},
                           {"column", col.name},
                           {"type", type_to_sql_word(col.declared_type)}};
  task.provenance.table = table;
  task.provenance.column = col.name;
  task.record = render_record(tpl, task.provenance.fills, db_id);
  return task;
}

GeneratedTask gen_table_from_row(const std::vector<Cell>& row,
                                 const std::vector<std::string>& column_order,
                                 const TableSchema& table, const TaskTemplate& tpl,
                                 const std::string& db_id) {
  GeneratedTask task;
  std::vector<std::string> pairs;
  for (std::size_t i = 0; i < row.size() && i < column_order.size(); ++i) {
    if (row[i].is_null()) continue;  // nulls carry no signal for the table
    pairs.push_back(column_order[i] + ": " + render_cell(row[i]));
  }
  task.provenance.fills = {{"row", join(pairs)}, {"table", table.name}};
  task.provenance.table = table.name;
  task.record = render_record(tpl, task.provenance.fills, db_id);
  return task;
}

GeneratedTask gen_value_clustering_by_table(
    const Groups& per_table_values, const TaskTemplate& tpl, const std::string& db_id,
    std::uint64_t shuffle_seed) {
  GeneratedTask task;
  task.provenance.presented = shuffled_union(per_table_values, shuffle_seed);
  task.provenance.groups = per_table_values;
  task.provenance.fills = {{"values", join(task.provenance.presented)},
                           {"groups", render_named_groups(per_table_values)}};
  task.record = render_record(tpl, task.provenance.fills, db_id);
  return task;
}

GeneratedTask gen_table_from_columns(const std::vector<std::string>& cols,
                                     const TableSchema& table, const TaskTemplate& tpl,
                                     const std::string& db_id) {
  GeneratedTask task;
  task.provenance.fills = {{"columns", join(cols)}, {"table", table.name}};
  task.provenance.table = table.name;
  task.provenance.groups = {{table.name, cols}};
  task.record = render_record(tpl, task.provenance.fills, db_id);
  return task;
}

GeneratedTask gen_column_clustering_by_table(const Groups& per_table_columns,
                                             const TaskTemplate& tpl,
                                             const std::string& db_id,
                                             std::uint64_t shuffle_seed) {
  GeneratedTask task;
  task.provenance.presented = shuffled_union(per_table_columns, shuffle_seed);
  task.provenance.groups = per_table_columns;
  task.provenance.fills = {{"columns", join(task.provenance.presented)},
                           {"groups", render_from_groups(per_table_columns)}};
  task.record = render_record(tpl, task.provenance.fills, db_id);
  return task;
}

bool tables_joinable(const std::string& t1, const std::string& t2,
                     const std::vector<ForeignKey>& db_fks) {
  for (const auto& fk : db_fks) {
    if ((ident_equal(fk.from_table, t1) && ident_equal(fk.to_table, t2)) ||
        (ident_equal(fk.from_table, t2) && ident_equal(fk.to_table, t1))) {
      return true;
    }
  }
  return false;
}

GeneratedTask gen_join_compatibility(const TableSchema& t1, const TableSchema& t2,
                                     const std::vector<ForeignKey>& db_fks,
                                     const TaskTemplate& tpl, const std::string& db_id) {
  GeneratedTask task;
  const bool label = tables_joinable(t1.name, t2.name, db_fks);
  auto names = [](const TableSchema& t) {
    std::vector<std::string> out;
    out.reserve(t.columns.size());
    for (const auto& col : t.columns) out.push_back(col.name);
    return out;
  };
  task.provenance.fills = {{"table_a", t1.name},
                           {"columns_a", join(names(t1))},
                           {"table_b", t2.name},
                           {"columns_b", join(names(t2))},
                           {"label", label ? "yes" : "no"}};
  task.provenance.table = t1.name;
  task.provenance.table_b = t2.name;
  task.provenance.label = label;
  task.record = render_record(tpl, task.provenance.fills, db_id);
  return task;
}

std::map<TaskKind, std::size_t> GenerationConfig::default_quotas() {
  // Tuned so a multi-table corpus lands near the reference
  // semantic:schema objective ratio of ~1.778. Join-compatibility is
  // bounded by the table-pair count, so it carries the smallest quota.
  std::map<TaskKind, std::size_t> quotas;
  for (TaskKind kind : kAllTaskKinds) quotas[kind] = 30;
  quotas[TaskKind::table_from_columns] = 43;
  quotas[TaskKind::column_clustering_by_table] = 43;
  quotas[TaskKind::join_compatibility] = 16;
  return quotas;
}

DbMaterial prepare_material(const DatabaseSchema& schema, const RowProvider& rows,
                            const SamplerConfig& sampler, const GenerationConfig& gen) {
  DbMaterial material;
  material.schema = schema;
  for (const auto& table : schema.tables) {
    TableMaterial tm;
    tm.table = table.name;
    RowSet rs = rows(schema, table.name);
    tm.subtable = build_subtable(rs, sampler);
    std::unordered_set<std::string> pooled;
    for (const auto& col : table.columns) {
      if (rs.column_index(col.name)) {
        tm.column_samples.push_back(
            sample_cell_values(rs, col.name, gen.value_pool_size, sampler));
      } else {
        // Metadata may name columns the live file lacks; keep alignment.
        tm.column_samples.push_back(ValueSample{col.name, {}, 0});
      }
      for (const auto& v : tm.column_samples.back().values) {
        if (pooled.insert(v).second) tm.value_pool.push_back(v);
      }
    }
    material.tables.push_back(std::move(tm));
  }
  return material;
}

namespace {

// Drives one task kind: calls `attempt(i, emitted)` until the quota is
// met or the attempt budget runs out, dropping exact-duplicate records.
// The emitted count feeds template rotation and label scheduling, so a
// dropped duplicate retries the same slot.
using QuotaAttempt =
    std::function<std::optional<GeneratedTask>(std::size_t, std::size_t)>;

void run_quota(std::size_t quota, const QuotaAttempt& attempt,
               std::vector<GeneratedTask>& out) {
  if (quota == 0) return;
  std::unordered_set<std::string> seen;
  std::size_t emitted = 0;
  const std::size_t max_attempts = quota * 4 + 8;
  for (std::size_t i = 0; i < max_attempts && emitted < quota; ++i) {
    auto task = attempt(i, emitted);
    if (!task) continue;
    std::string key = task->record.instruction;
    key += '\x1f';
    key += task->record.input;
    key += '\x1f';
    key += task->record.output;
    if (!seen.insert(key).second) continue;
    out.push_back(std::move(*task));
    ++emitted;
  }
}

struct ColumnPick {
  std::size_t table;
  std::size_t column;
};

// Default collision handling: values known to be ambiguous in the
// database never enter a clustering instance.
void drop_ambiguous(Groups& groups, const std::unordered_set<std::string>& ambiguous) {
  for (auto& [name, values] : groups) {
    std::erase_if(values, [&](const std::string& v) { return ambiguous.count(v) > 0; });
  }
  std::erase_if(groups, [](const auto& g) { return g.second.empty(); });
}

// Opt-in collision handling: every presented value is attributed to each
// presented group that owns it.
void attribute_shared(Groups& groups,
                      const std::function<bool(const std::string&, std::size_t)>& owns) {
  std::unordered_set<std::string> presented;
  for (const auto& [name, values] : groups) presented.insert(values.begin(), values.end());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (const auto& v : presented) {
      auto& values = groups[g].second;
      if (owns(v, g) && std::find(values.begin(), values.end(), v) == values.end()) {
        values.push_back(v);
      }
    }
  }
}

void cap_presented(Groups& groups, std::size_t cap) {
  auto total = [&groups] {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.second.size();
    return n;
  };
  while (total() > cap) {
    auto largest = std::max_element(
        groups.begin(), groups.end(),
        [](const auto& a, const auto& b) { return a.second.size() < b.second.size(); });
    largest->second.pop_back();
  }
  std::erase_if(groups, [](const auto& g) { return g.second.empty(); });
}

ValueSample subset_sample(const ValueSample& pool, std::size_t n, Rng& rng) {
  ValueSample out;
  out.column = pool.column;
  out.values = rng.sample(pool.values, n);
  for (const auto& v : out.values) {
    if (parses_as_number(v)) ++out.numeric_count;
  }
  return out;
}

class DbGenerator {
 public:
  DbGenerator(const DbMaterial& material, const TemplatePack& pack,
              const GenerationConfig& cfg)
      : m_(material),
        pack_(pack),
        cfg_(cfg),
        rng_(mix_seed(cfg.seed, material.schema.db_id)),
        db_id_(material.schema.db_id) {
    for (std::size_t t = 0; t < m_.tables.size(); ++t) {
      const auto& table = m_.schema.tables[t];
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        all_columns_.push_back({t, c});
        if (!m_.tables[t].column_samples[c].values.empty()) {
          sampled_columns_.push_back({t, c});
        }
      }
      if (!m_.tables[t].value_pool.empty()) tables_with_values_.push_back(t);
    }
    for (const auto& table : m_.schema.tables) {
      for (const auto& fk : table.foreign_keys) db_fks_.push_back(fk);
    }

    // Ambiguous values: a value stored in several columns of one table
    // (kind 2) or in several tables (kind 6) is noisy supervision and is
    // excluded from clustering instances unless explicitly kept.
    column_value_sets_.resize(m_.tables.size());
    within_table_ambiguous_.resize(m_.tables.size());
    std::map<std::string, std::size_t> table_owners;
    for (std::size_t t = 0; t < m_.tables.size(); ++t) {
      std::map<std::string, std::size_t> column_owners;
      for (const auto& sample : m_.tables[t].column_samples) {
        column_value_sets_[t].emplace_back(sample.values.begin(), sample.values.end());
        for (const auto& v : column_value_sets_[t].back()) ++column_owners[v];
      }
      for (const auto& [v, owners] : column_owners) {
        if (owners > 1) within_table_ambiguous_[t].insert(v);
      }
      for (const auto& v : m_.tables[t].value_pool) ++table_owners[v];
    }
    for (const auto& [v, owners] : table_owners) {
      if (owners > 1) cross_table_ambiguous_.insert(v);
    }
  }

  std::vector<GeneratedTask> run() {
    std::vector<GeneratedTask> out;
    kind_column_from_values(out);
    kind_value_clustering_by_column(out);
    kind_value_column_membership(out);
    kind_column_type_prediction(out);
    kind_table_from_row(out);
    kind_value_clustering_by_table(out);
    kind_table_from_columns(out);
    kind_column_clustering_by_table(out);
    kind_join_compatibility(out);
    return out;
  }

 private:
  std::size_t quota(TaskKind kind) const {
    // A pack that phrases only some kinds generates only those kinds.
    if (pack_.for_kind(kind).empty()) return 0;
    const auto it = cfg_.quotas.find(kind);
    return it == cfg_.quotas.end() ? 0 : it->second;
  }

  const TaskTemplate& tpl(TaskKind kind, std::size_t counter) const {
    return pack_.pick(kind, counter);
  }

  const ColumnSchema& column_of(ColumnPick pick) const {
    return m_.schema.tables[pick.table].columns[pick.column];
  }
  const ValueSample& pool_of(ColumnPick pick) const {
    return m_.tables[pick.table].column_samples[pick.column];
  }

  void kind_column_from_values(std::vector<GeneratedTask>& out) {
    if (sampled_columns_.empty()) return;
    run_quota(
        quota(TaskKind::column_from_values),
        [&](std::size_t i, std::size_t emitted) -> std::optional<GeneratedTask> {
          const ColumnPick pick = sampled_columns_[i % sampled_columns_.size()];
          const auto sample = subset_sample(pool_of(pick), cfg_.values_per_sample, rng_);
          return gen_col_from_values(sample, column_of(pick),
                                     m_.schema.tables[pick.table].name,
                                     tpl(TaskKind::column_from_values, emitted), db_id_);
        },
        out);
  }

  void kind_value_clustering_by_column(std::vector<GeneratedTask>& out) {
    std::vector<std::size_t> eligible;
    for (std::size_t t = 0; t < m_.tables.size(); ++t) {
      std::size_t sampled = 0;
      for (const auto& s : m_.tables[t].column_samples) {
        if (!s.values.empty()) ++sampled;
      }
      if (sampled >= 2) eligible.push_back(t);
    }
    if (eligible.empty()) return;
    run_quota(
        quota(TaskKind::value_clustering_by_column),
        [&](std::size_t i, std::size_t emitted) -> std::optional<GeneratedTask> {
          const std::size_t t = eligible[i % eligible.size()];
          std::vector<std::size_t> cols;
          for (std::size_t c = 0; c < m_.tables[t].column_samples.size(); ++c) {
            if (!m_.tables[t].column_samples[c].values.empty()) cols.push_back(c);
          }
          const std::size_t want = 2 + rng_.index(std::min<std::size_t>(4, cols.size()) - 1);
          cols = rng_.sample(cols, want);

          Groups groups;
          for (std::size_t c : cols) {
            auto s = subset_sample(m_.tables[t].column_samples[c], cfg_.values_per_group, rng_);
            groups.emplace_back(s.column, std::move(s.values));
          }
          if (cfg_.include_colliding_values) {
            attribute_shared(groups, [&](const std::string& v, std::size_t g) {
              return column_value_sets_[t][cols[g]].count(v) > 0;
            });
          } else {
            drop_ambiguous(groups, within_table_ambiguous_[t]);
          }
          cap_presented(groups, cfg_.max_presented_items);
          if (groups.size() < 2) return std::nullopt;

          std::vector<ValueSample> samples;
          for (const auto& [name, values] : groups) {
            samples.push_back(ValueSample{name, values, 0});
          }
          return gen_value_clustering_by_column(
              samples, m_.schema.tables[t].name,
              tpl(TaskKind::value_clustering_by_column, emitted), db_id_, rng_.next());
        },
        out);
  }

  void kind_value_column_membership(std::vector<GeneratedTask>& out) {
    if (sampled_columns_.empty()) return;
    run_quota(
        quota(TaskKind::value_column_membership),
        [&](std::size_t i, std::size_t emitted) -> std::optional<GeneratedTask> {
          const ColumnPick truth = sampled_columns_[i % sampled_columns_.size()];
          // Labels alternate by emitted slot: exact 50/50 balance that
          // duplicate-dropping cannot skew.
          bool label = emitted % 2 == 0;
          ColumnPick candidate = truth;
          if (!label) {
            // Uniform over the same database's differently named columns;
            // a same-named column elsewhere would flip the truth value.
            std::vector<ColumnPick> others;
            for (const auto& pick : all_columns_) {
              if (ident_equal(column_of(pick).name, column_of(truth).name)) continue;
              others.push_back(pick);
            }
            if (others.empty()) {
              label = true;
            } else {
              candidate = others[rng_.index(others.size())];
            }
          }
          const auto sample = subset_sample(pool_of(truth), cfg_.values_per_sample, rng_);
          return gen_value_column_membership(
              sample, column_of(candidate), label,
              tpl(TaskKind::value_column_membership, emitted), db_id_);
        },
        out);
  }

  void kind_column_type_prediction(std::vector<GeneratedTask>& out) {
    if (sampled_columns_.empty()) return;
    run_quota(
        quota(TaskKind::column_type_prediction),
        [&](std::size_t i, std::size_t emitted) -> std::optional<GeneratedTask> {
          const ColumnPick pick = sampled_columns_[i % sampled_columns_.size()];
          const auto sample = subset_sample(pool_of(pick), cfg_.values_per_sample, rng_);
          return gen_column_type_prediction(
              sample, column_of(pick), m_.schema.tables[pick.table].name,
              tpl(TaskKind::column_type_prediction, emitted), db_id_);
        },
        out);
  }

  void kind_table_from_row(std::vector<GeneratedTask>& out) {
    std::vector<std::pair<std::size_t, std::size_t>> candidates;  // (table, row)
    for (std::size_t t = 0; t < m_.tables.size(); ++t) {
      for (std::size_t r = 0; r < m_.tables[t].subtable.rows.size(); ++r) {
        candidates.emplace_back(t, r);
      }
    }
    if (candidates.empty()) return;
    run_quota(
        quota(TaskKind::table_from_row),
        [&](std::size_t i, std::size_t emitted) -> std::optional<GeneratedTask> {
          const auto [t, r] = candidates[i % candidates.size()];
          const auto& sub = m_.tables[t].subtable;
          return gen_table_from_row(sub.rows[r], sub.column_order, m_.schema.tables[t],
                                    tpl(TaskKind::table_from_row, emitted), db_id_);
        },
        out);
  }

  void kind_value_clustering_by_table(std::vector<GeneratedTask>& out) {
    if (tables_with_values_.size() < 2) return;
    run_quota(
        quota(TaskKind::value_clustering_by_table),
        [&](std::size_t, std::size_t emitted) -> std::optional<GeneratedTask> {
          const std::size_t want =
              2 + rng_.index(std::min<std::size_t>(4, tables_with_values_.size()) - 1);
          const auto chosen = rng_.sample(tables_with_values_, want);

          Groups groups;
          for (std::size_t t : chosen) {
            groups.emplace_back(m_.schema.tables[t].name,
                                rng_.sample(m_.tables[t].value_pool, cfg_.values_per_group));
          }
          if (cfg_.include_colliding_values) {
            attribute_shared(groups, [&](const std::string& v, std::size_t g) {
              const auto& pool = m_.tables[chosen[g]].value_pool;
              return std::find(pool.begin(), pool.end(), v) != pool.end();
            });
          } else {
            drop_ambiguous(groups, cross_table_ambiguous_);
          }
          cap_presented(groups, cfg_.max_presented_items);
          if (groups.size() < 2) return std::nullopt;
          return gen_value_clustering_by_table(
              groups, tpl(TaskKind::value_clustering_by_table, emitted), db_id_,
              rng_.next());
        },
        out);
  }

  void kind_table_from_columns(std::vector<GeneratedTask>& out) {
    std::vector<std::size_t> eligible;
    for (std::size_t t = 0; t < m_.schema.tables.size(); ++t) {
      if (!m_.schema.tables[t].columns.empty()) eligible.push_back(t);
    }
    if (eligible.empty()) return;
    run_quota(
        quota(TaskKind::table_from_columns),
        [&](std::size_t i, std::size_t emitted) -> std::optional<GeneratedTask> {
          const std::size_t t = eligible[i % eligible.size()];
          const auto& table = m_.schema.tables[t];
          std::vector<std::string> names;
          for (const auto& col : table.columns) names.push_back(col.name);
          std::size_t want = 1;
          if (names.size() > 1) {
            want = 2 + rng_.index(
                           std::min(cfg_.max_columns_per_subset, names.size()) - 1);
          }
          return gen_table_from_columns(rng_.sample(names, want), table,
                                        tpl(TaskKind::table_from_columns, emitted),
                                        db_id_);
        },
        out);
  }

  void kind_column_clustering_by_table(std::vector<GeneratedTask>& out) {
    std::vector<std::size_t> eligible;
    for (std::size_t t = 0; t < m_.schema.tables.size(); ++t) {
      if (!m_.schema.tables[t].columns.empty()) eligible.push_back(t);
    }
    if (eligible.size() < 2) return;
    run_quota(
        quota(TaskKind::column_clustering_by_table),
        [&](std::size_t, std::size_t emitted) -> std::optional<GeneratedTask> {
          const std::size_t want =
              2 + rng_.index(std::min<std::size_t>(4, eligible.size()) - 1);
          const auto chosen = rng_.sample(eligible, want);

          Groups groups;
          for (std::size_t t : chosen) {
            std::vector<std::string> names;
            for (const auto& col : m_.schema.tables[t].columns) names.push_back(col.name);
            groups.emplace_back(m_.schema.tables[t].name, rng_.sample(names, 6));
          }
          cap_presented(groups, cfg_.max_presented_items);
          if (groups.size() < 2) return std::nullopt;
          return gen_column_clustering_by_table(
              groups, tpl(TaskKind::column_clustering_by_table, emitted), db_id_,
              rng_.next());
        },
        out);
  }

  void kind_join_compatibility(std::vector<GeneratedTask>& out) {
    const std::size_t q = quota(TaskKind::join_compatibility);
    if (q == 0 || m_.schema.tables.size() < 2) return;

    std::vector<std::pair<std::size_t, std::size_t>> linked, unlinked;
    for (std::size_t i = 0; i < m_.schema.tables.size(); ++i) {
      for (std::size_t j = i + 1; j < m_.schema.tables.size(); ++j) {
        const bool joinable =
            tables_joinable(m_.schema.tables[i].name, m_.schema.tables[j].name, db_fks_);
        (joinable ? linked : unlinked).emplace_back(i, j);
      }
    }

    // Every FK-linked pair, balanced with uniformly drawn unlinked pairs.
    const std::size_t linked_take = std::min(linked.size(), (q + 1) / 2);
    const std::size_t unlinked_take = std::min(unlinked.size(), q - linked_take);
    linked.resize(linked_take);
    unlinked = rng_.sample(unlinked, unlinked_take);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < std::max(linked.size(), unlinked.size()); ++i) {
      if (i < linked.size()) pairs.push_back(linked[i]);
      if (i < unlinked.size()) pairs.push_back(unlinked[i]);
    }

    if (pairs.empty()) return;
    run_quota(
        q,
        [&](std::size_t i, std::size_t emitted) -> std::optional<GeneratedTask> {
          // cycling lets the template rotation restate a pair when the
          // pair supply is smaller than the quota
          const auto [a, b] = pairs[i % pairs.size()];
          return gen_join_compatibility(m_.schema.tables[a], m_.schema.tables[b], db_fks_,
                                        tpl(TaskKind::join_compatibility, emitted),
                                        db_id_);
        },
        out);
  }

  const DbMaterial& m_;
  const TemplatePack& pack_;
  const GenerationConfig& cfg_;
  Rng rng_;
  std::string db_id_;

  std::vector<ColumnPick> all_columns_;
  std::vector<ColumnPick> sampled_columns_;
  std::vector<std::size_t> tables_with_values_;
  std::vector<ForeignKey> db_fks_;
  std::vector<std::vector<std::unordered_set<std::string>>> column_value_sets_;
  std::vector<std::unordered_set<std::string>> within_table_ambiguous_;
  std::unordered_set<std::string> cross_table_ambiguous_;
};

}  // namespace

std::vector<GeneratedTask> generate_for_db(const DbMaterial& material,
                                           const TemplatePack& pack,
                                           const GenerationConfig& cfg) {
  return DbGenerator(material, pack, cfg).run();
}

void accumulate_stats(CorpusStats& stats, const TaskRecord& record) {
  ++stats.total;
  ++stats.per_objective[objective_name(record.objective)];
  ++stats.per_task_kind[task_kind_name(record.task_kind)];
  ++stats.per_db[record.db_id];
}

std::optional<double> CorpusStats::objective_ratio() const {
  auto count = [this](Objective o) {
    const auto it = per_objective.find(objective_name(o));
    return it == per_objective.end() ? std::size_t{0} : it->second;
  };
  const std::size_t semantic = count(Objective::column_semantic) + count(Objective::table_semantic);
  const std::size_t schema = count(Objective::schema);
  if (schema == 0) return std::nullopt;
  return static_cast<double>(semantic) / static_cast<double>(schema);
}

ordered_json CorpusStats::to_json() const {
  ordered_json j;
  j["total"] = total;
  j["per_objective"] = per_objective;
  j["per_task_kind"] = per_task_kind;
  j["per_db"] = per_db;
  j["skipped_dbs"] = skipped_dbs;
  if (const auto ratio = objective_ratio()) {
    j["objective_ratio"] = *ratio;
  } else {
    j["objective_ratio"] = nullptr;
  }
  return j;
}

CorpusStats CorpusStats::from_json(const json& j) {
  CorpusStats stats;
  stats.total = j.at("total").get<std::size_t>();
  stats.per_objective = j.at("per_objective").get<std::map<std::string, std::size_t>>();
  stats.per_task_kind = j.at("per_task_kind").get<std::map<std::string, std::size_t>>();
  stats.per_db = j.at("per_db").get<std::map<std::string, std::size_t>>();
  if (j.contains("skipped_dbs")) {
    stats.skipped_dbs = j.at("skipped_dbs").get<std::vector<std::string>>();
  }
  return stats;
}

CorpusStats generate_corpus(const std::vector<DbMaterial>& materials,
                            const TemplatePack& pack, const GenerationConfig& cfg,
                            const TaskSink& sink) {
  std::vector<const DbMaterial*> ordered;
  ordered.reserve(materials.size());
  for (const auto& m : materials) ordered.push_back(&m);
  std::sort(ordered.begin(), ordered.end(), [](const DbMaterial* a, const DbMaterial* b) {
    return a->schema.db_id < b->schema.db_id;
  });

  CorpusStats stats;
  for (const DbMaterial* material : ordered) {
    if (material->schema.tables.empty()) {
      stats.skipped_dbs.push_back(material->schema.db_id);
      continue;
    }
    for (const auto& task : generate_for_db(*material, pack, cfg)) {
      accumulate_stats(stats, task.record);
      sink(task);
    }
  }
  return stats;
}

}  // namespace skforge
