#include "skforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "skforge/errors.hpp"
#include "skforge/spider.hpp"
#include "skforge/sql_parser.hpp"

namespace skforge {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void chomp(std::string& line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
}

std::vector<std::string> find_database_files(const std::string& db_root) {
  std::vector<std::string> files;
  if (!fs::exists(db_root)) throw FileNotFoundError(db_root);
  for (const auto& entry : fs::recursive_directory_iterator(db_root)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".sqlite" || ext == ".db") files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

std::vector<DatabaseSchema> load_schemas(const std::string& db_root,
                                         const std::optional<std::string>& tables_json) {
  std::map<std::string, DatabaseSchema> by_id;

  if (!db_root.empty()) {
    for (const auto& file : find_database_files(db_root)) {
      DatabaseSchema schema = load_database(file);
      by_id.emplace(schema.db_id, std::move(schema));
    }
  }

  if (tables_json) {
    for (auto& schema : load_spider_tables(*tables_json)) {
      // Metadata wins db_id naming and structure; the file only provides
      // row access.
      auto it = by_id.find(schema.db_id);
      if (it != by_id.end()) {
        schema.file_path = it->second.file_path;
        it->second = std::move(schema);
      } else {
        by_id.emplace(schema.db_id, std::move(schema));
      }
    }
  }

  std::vector<DatabaseSchema> out;
  out.reserve(by_id.size());
  for (auto& [id, schema] : by_id) out.push_back(std::move(schema));
  return out;
}

ordered_json run_extract(const PipelineConfig& cfg) {
  auto dump = ordered_json::array();
  for (const auto& schema : load_schemas(cfg.db_root, cfg.tables_json)) {
    dump.push_back(schema_to_dump(schema));
  }
  return dump;
}

namespace {

RowSet empty_rows(const DatabaseSchema& schema, const std::string& table) {
  RowSet rows;
  rows.table = table;
  if (const auto* ts = schema.find_table(table)) {
    for (const auto& col : ts->columns) rows.column_order.push_back(col.name);
  }
  return rows;
}

RowProvider make_row_provider(const GenerationConfig& gen) {
  return [limit = gen.max_rows_per_table](const DatabaseSchema& schema,
                                          const std::string& table) {
    if (schema.file_path.empty()) return empty_rows(schema, table);
    return fetch_rows(schema, table, limit);
  };
}

TemplatePack load_pack(const PipelineConfig& cfg) {
  if (cfg.templates_path.empty()) return TemplatePack::builtin();
  return TemplatePack::load_file(cfg.templates_path);
}

}  // namespace

CorpusStats run_generate(const PipelineConfig& cfg, std::size_t jobs) {
  const TemplatePack pack = load_pack(cfg);
  std::vector<DatabaseSchema> schemas = load_schemas(cfg.db_root, cfg.tables_json);
  const RowProvider provider = make_row_provider(cfg.generation);

  // Each database renders into its own buffer; workers race only over
  // which db they take, so output is byte-identical for any job count.
  std::vector<std::string> buffers(schemas.size());
  std::vector<CorpusStats> partials(schemas.size());

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= schemas.size()) break;
      if (schemas[i].tables.empty()) {
        partials[i].skipped_dbs.push_back(schemas[i].db_id);
        continue;
      }
      const DbMaterial material =
          prepare_material(schemas[i], provider, cfg.sampler, cfg.generation);
      std::string& buf = buffers[i];
      for (const auto& task : generate_for_db(material, pack, cfg.generation)) {
        accumulate_stats(partials[i], task.record);
        buf += record_to_json(task.record).dump();
        buf += '\n';
      }
    }
  };

  const std::size_t n_workers = std::max<std::size_t>(1, std::min(jobs, schemas.size()));
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> workers;
    workers.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) workers.emplace_back(work);
    for (auto& worker : workers) worker.join();
  }

  CorpusStats stats;
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw InputError("cannot write corpus to " + cfg.output_path);
  for (std::size_t i = 0; i < schemas.size(); ++i) {
    out << buffers[i];
    stats.total += partials[i].total;
    for (const auto& [k, v] : partials[i].per_objective) stats.per_objective[k] += v;
    for (const auto& [k, v] : partials[i].per_task_kind) stats.per_task_kind[k] += v;
    for (const auto& [k, v] : partials[i].per_db) stats.per_db[k] += v;
    for (const auto& s : partials[i].skipped_dbs) stats.skipped_dbs.push_back(s);
  }
  out.close();

  if (!cfg.stats_path.empty()) {
    write_text_file(cfg.stats_path, stats.to_json().dump(2) + "\n");
  }
  return stats;
}

ordered_json run_sample(const PipelineConfig& cfg, const std::string& db_id,
                        const std::optional<std::string>& table) {
  for (const auto& schema : load_schemas(cfg.db_root, cfg.tables_json)) {
    if (schema.db_id != db_id) continue;
    const RowProvider provider = make_row_provider(cfg.generation);
    const DbMaterial material = prepare_material(schema, provider, cfg.sampler, cfg.generation);

    ordered_json out;
    out["db_id"] = db_id;
    auto tables = ordered_json::array();
    for (const auto& tm : material.tables) {
      if (table && !ident_equal(*table, tm.table)) continue;
      ordered_json t;
      t["table"] = tm.table;
      t["column_order"] = tm.subtable.column_order;
      auto rows = ordered_json::array();
      for (const auto& row : tm.subtable.rows) {
        auto cells = ordered_json::array();
        for (const auto& cell : row) {
          cells.push_back(cell.is_null() ? ordered_json(nullptr)
                                         : ordered_json(render_cell(cell)));
        }
        rows.push_back(std::move(cells));
      }
      t["rows"] = rows;
      t["cluster_ids"] = tm.subtable.provenance;
      auto samples = ordered_json::array();
      for (const auto& sample : tm.column_samples) {
        samples.push_back(ordered_json{{"column", sample.column},
                                       {"values", sample.values},
                                       {"numeric_count", sample.numeric_count}});
      }
      t["value_samples"] = samples;
      tables.push_back(std::move(t));
    }
    out["tables"] = tables;
    if (table && tables.empty()) throw UnknownTableError(*table);
    return out;
  }
  throw DatabaseUnavailableError(db_id);
}

// --- corpus stats + file-level checks --------------------------------------

namespace {

const std::vector<std::string>& record_keys() {
  static const std::vector<std::string> keys = {
      "instruction", "input", "output", "task_kind", "objective", "db_id", "template_id"};
  return keys;
}

// Turns a template body into an anchored regex with one capture per
// placeholder, in order of appearance.
std::regex template_pattern(const std::string& text, std::vector<std::string>& names) {
  std::string pattern = "^";
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '{') {
      const auto close = text.find('}', i + 1);
      if (close != std::string::npos && close > i + 1) {
        names.push_back(text.substr(i + 1, close - i - 1));
        pattern += "([\\s\\S]*?)";
        i = close + 1;
        continue;
      }
    }
    if (std::string("\\^$.|?*+()[]{}").find(c) != std::string::npos) pattern += '\\';
    pattern += c;
    ++i;
  }
  pattern += "$";
  return std::regex(pattern);
}

std::vector<std::string> split(const std::string& text, const std::string& sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + sep.size();
  }
}

std::optional<std::map<std::string, std::string>> reverse_match(
    const TaskTemplate& tpl, const TaskRecord& record) {
  std::map<std::string, std::string> fills;
  for (const auto& [text, actual] :
       {std::pair{tpl.question_text, record.instruction}, {tpl.input_text, record.input}}) {
    std::vector<std::string> names;
    const std::regex pattern = template_pattern(text, names);
    std::smatch match;
    if (!std::regex_match(actual, match, pattern)) return std::nullopt;
    for (std::size_t i = 0; i < names.size(); ++i) {
      fills[names[i]] = match[i + 1].str();
    }
  }
  return fills;
}

// The presented-items vs output-groups comparison works on the raw
// rendered strings, split identically on both sides, so values containing
// the separator cancel out.
bool partition_matches(TaskKind kind, const std::string& presented,
                       const std::string& groups) {
  std::unordered_set<std::string> lhs;
  for (const auto& item : split(presented, ", ")) lhs.insert(item);

  std::unordered_set<std::string> rhs;
  for (const auto& line : split(groups, "\n")) {
    std::string items;
    if (kind == TaskKind::column_clustering_by_table) {
      const auto from = line.rfind(" FROM ");
      if (from == std::string::npos) return false;
      items = line.substr(0, from);
    } else {
      const auto colon = line.find(": ");
      if (colon == std::string::npos) return false;
      items = line.substr(colon + 2);
    }
    for (const auto& item : split(items, ", ")) rhs.insert(item);
  }
  return lhs == rhs;
}

const TaskTemplate* find_template(const TemplatePack& pack, TaskKind kind,
                                  const std::string& id) {
  for (const auto& tpl : pack.for_kind(kind)) {
    if (tpl.template_id == id) return &tpl;
  }
  return nullptr;
}

}  // namespace

ordered_json CorpusCheckReport::to_json() const {
  ordered_json j = stats.to_json();
  ordered_json checks;
  checks["records"] = records;
  checks["template_matched"] = template_matched;
  checks["unknown_template"] = unknown_template;
  checks["partition_checked"] = partition_checked;
  checks["partition_ok"] = partition_ok;
  checks["label_total"] = label_total;
  checks["label_wellformed"] = label_wellformed;
  checks["residual_markers"] = residual_markers;
  j["derivability_checks"] = checks;
  return j;
}

CorpusCheckReport run_stats(const std::string& corpus_path, const TemplatePack& pack) {
  std::ifstream in(corpus_path, std::ios::binary);
  if (!in) throw FileNotFoundError(corpus_path);

  CorpusCheckReport report;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    chomp(line);
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const json::exception& e) {
      throw DataFormatError("corpus line " + std::to_string(lineno) +
                            " is not valid JSON: " + e.what());
    }

    // exact key set, in declared order
    std::vector<std::string> keys;
    for (const auto& item : j.items()) keys.push_back(item.key());
    if (keys != record_keys()) {
      throw DataFormatError("corpus line " + std::to_string(lineno) +
                            " has unexpected record keys");
    }

    TaskRecord record;
    try {
      record = record_from_json(j);
    } catch (const Error& e) {
      throw DataFormatError("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
    if (record.output.empty()) {
      throw DataFormatError("corpus line " + std::to_string(lineno) + " has empty output");
    }
    ++report.records;
    accumulate_stats(report.stats, record);

    for (const char* marker : {"{values}", "{column}", "{columns}", "{table}", "{row}",
                               "{groups}", "{label}", "{type}", "{candidate_column}"}) {
      if (record.instruction.find(marker) != std::string::npos ||
          record.output.find(marker) != std::string::npos) {
        ++report.residual_markers;
        break;
      }
    }

    if (record.task_kind == TaskKind::value_column_membership ||
        record.task_kind == TaskKind::join_compatibility) {
      ++report.label_total;
      if (record.output == "yes" || record.output == "no") ++report.label_wellformed;
    }

    const TaskTemplate* tpl = find_template(pack, record.task_kind, record.template_id);
    if (!tpl) {
      ++report.unknown_template;
      continue;
    }
    const auto fills = reverse_match(*tpl, record);
    if (!fills) continue;
    ++report.template_matched;

    const bool clustering = record.task_kind == TaskKind::value_clustering_by_column ||
                            record.task_kind == TaskKind::value_clustering_by_table ||
                            record.task_kind == TaskKind::column_clustering_by_table;
    if (clustering) {
      const auto presented = record.task_kind == TaskKind::column_clustering_by_table
                                 ? fills->find("columns")
                                 : fills->find("values");
      if (presented != fills->end()) {
        ++report.partition_checked;
        if (partition_matches(record.task_kind, presented->second, record.output)) {
          ++report.partition_ok;
        }
      }
    }
  }
  return report;
}

// --- evaluation inputs ------------------------------------------------------

std::vector<EvalExample> load_eval_examples(const std::string& gold_path,
                                            const std::string& preds_path) {
  std::ifstream gold_in(gold_path);
  if (!gold_in) throw FileNotFoundError(gold_path);
  json gold;
  try {
    gold_in >> gold;
  } catch (const json::exception& e) {
    throw DataFormatError("malformed gold JSON in " + gold_path + ": " + e.what());
  }
  if (!gold.is_array()) throw DataFormatError("gold file must be a JSON array");

  std::vector<EvalExample> examples;
  examples.reserve(gold.size());
  for (const auto& entry : gold) {
    EvalExample ex;
    try {
      ex.db_id = entry.at("db_id").get<std::string>();
      ex.gold_sql = entry.at("query").get<std::string>();
      if (entry.contains("question")) ex.question = entry.at("question").get<std::string>();
    } catch (const json::exception& e) {
      throw DataFormatError(std::string("bad gold entry: ") + e.what());
    }
    examples.push_back(std::move(ex));
  }

  std::ifstream preds_in(preds_path);
  if (!preds_in) throw FileNotFoundError(preds_path);
  std::string line;
  std::size_t lineno = 0;
  bool jsonl = false;
  bool format_known = false;
  while (std::getline(preds_in, line)) {
    ++lineno;
    chomp(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!format_known) {
      // JSONL {index, sql} or one bare SQL statement per line
      jsonl = false;
      if (line[line.find_first_not_of(" \t")] == '{') {
        try {
          const json probe = json::parse(line);
          jsonl = probe.is_object() && probe.contains("index") && probe.contains("sql");
        } catch (const json::exception&) {
        }
      }
      format_known = true;
    }
    if (jsonl) {
      json j;
      try {
        j = json::parse(line);
        const auto index = j.at("index").get<std::size_t>();
        if (index >= examples.size()) {
          throw DataFormatError("prediction index " + std::to_string(index) +
                                " out of range at line " + std::to_string(lineno));
        }
        examples[index].predicted_sql = j.at("sql").get<std::string>();
      } catch (const json::exception& e) {
        throw DataFormatError("bad prediction line " + std::to_string(lineno) + ": " +
                              e.what());
      }
    } else {
      const std::size_t index = lineno - 1;
      if (index < examples.size()) examples[index].predicted_sql = line;
    }
  }
  return examples;
}

EvalReport run_evaluate(const std::vector<EvalExample>& examples,
                        const std::string& db_root,
                        const std::optional<std::string>& tables_json,
                        const EvalConfig& cfg) {
  std::map<std::string, DatabaseSchema> schemas;
  std::unordered_set<std::string> wanted;
  for (const auto& ex : examples) wanted.insert(ex.db_id);

  if (tables_json) {
    for (auto& schema : load_spider_tables(*tables_json)) {
      if (wanted.count(schema.db_id)) schemas.emplace(schema.db_id, std::move(schema));
    }
  }
  for (const auto& db_id : wanted) {
    if (schemas.count(db_id)) continue;
    const std::string path = locate_database(db_root, db_id);
    if (path.empty()) continue;
    schemas.emplace(db_id, load_database(path));
  }

  return evaluate(examples, schemas, db_root, cfg);
}

ordered_json parse_dump_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path);
  auto out = ordered_json::array();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    chomp(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ordered_json entry;
    entry["line"] = lineno;
    entry["sql"] = line;
    try {
      entry["ast"] = sql::dump_ast(sql::parse_sql(line));
    } catch (const Error& e) {
      entry["error"] = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

}  // namespace skforge
