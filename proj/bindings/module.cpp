#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chrono>
#include <optional>
#include <string>

#include "skforge/column_refs.hpp"
#include "skforge/database.hpp"
#include "skforge/errors.hpp"
#include "skforge/pipeline.hpp"
#include "skforge/spider.hpp"
#include "skforge/sql_parser.hpp"
#include "skforge/sql_printer.hpp"

namespace py = pybind11;

namespace {

// nlohmann values cross the boundary as native Python objects.
py::object json_to_py(const nlohmann::ordered_json& j) {
  using nlohmann::ordered_json;
  switch (j.type()) {
    case ordered_json::value_t::null: return py::none();
    case ordered_json::value_t::boolean: return py::bool_(j.get<bool>());
    case ordered_json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case ordered_json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case ordered_json::value_t::number_float: return py::float_(j.get<double>());
    case ordered_json::value_t::string: return py::str(j.get<std::string>());
    case ordered_json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case ordered_json::value_t::object: {
      py::dict out;
      for (const auto& item : j.items()) {
        out[py::str(item.key())] = json_to_py(item.value());
      }
      return out;
    }
    default: return py::none();
  }
}

skforge::PipelineConfig config_from_path(const std::string& config_path) {
  auto cfg = config_path.empty() ? skforge::PipelineConfig{}
                                 : skforge::PipelineConfig::load_file(config_path);
  cfg.apply_env_overrides();
  return cfg;
}

skforge::SamplerConfig sampler_config(std::size_t k, std::size_t l, double max_numeric_ratio,
                                      std::size_t truncate, std::uint64_t seed) {
  skforge::SamplerConfig cfg;
  cfg.clusters_k = k;
  cfg.rows_per_cluster_l = l;
  cfg.max_numeric_ratio = max_numeric_ratio;
  cfg.value_truncate_len = truncate;
  cfg.rng_seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Database knowledge corpus construction and SQL evaluation core";

  py::register_exception<skforge::ParseError>(m, "SqlParseError", PyExc_ValueError);
  py::register_exception<skforge::UnsupportedFeatureError>(m, "UnsupportedSqlError",
                                                           PyExc_ValueError);
  py::register_exception<skforge::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<skforge::DataFormatError>(m, "DataFormatError", PyExc_ValueError);

  m.def(
      "load_database",
      [](const std::string& path) {
        return json_to_py(skforge::schema_to_dump(skforge::load_database(path)));
      },
      py::arg("path"), "Introspect a SQLite file into a schema dict.");

  m.def(
      "load_spider_tables",
      [](const std::string& path) {
        py::list out;
        for (const auto& schema : skforge::load_spider_tables(path)) {
          out.append(json_to_py(skforge::schema_to_dump(schema)));
        }
        return out;
      },
      py::arg("path"), "Parse a Spider tables.json into schema dicts.");

  m.def(
      "fetch_rows",
      [](const std::string& db_path, const std::string& table,
         std::optional<std::size_t> limit) {
        const auto schema = skforge::load_database(db_path);
        const auto rows = skforge::fetch_rows(schema, table, limit);
        py::dict out;
        out["table"] = rows.table;
        out["columns"] = rows.column_order;
        py::list data;
        for (const auto& row : rows.rows) {
          py::list cells;
          for (const auto& cell : row) {
            if (cell.is_null()) {
              cells.append(py::none());
            } else if (cell.is_integer()) {
              cells.append(py::int_(std::get<std::int64_t>(cell.data)));
            } else if (cell.is_real()) {
              cells.append(py::float_(std::get<double>(cell.data)));
            } else {
              cells.append(py::str(skforge::render_cell(cell)));
            }
          }
          data.append(cells);
        }
        out["rows"] = data;
        return out;
      },
      py::arg("db_path"), py::arg("table"), py::arg("limit") = py::none(),
      "Rows of a table in storage order.");

  m.def(
      "build_subtable",
      [](const std::string& db_path, const std::string& table, std::size_t clusters_k,
         std::size_t rows_per_cluster_l, double max_numeric_ratio, std::size_t truncate,
         std::uint64_t seed) {
        const auto schema = skforge::load_database(db_path);
        const auto rows = skforge::fetch_rows(schema, table);
        const auto cfg =
            sampler_config(clusters_k, rows_per_cluster_l, max_numeric_ratio, truncate, seed);
        const auto sub = skforge::build_subtable(rows, cfg);
        py::dict out;
        out["table"] = sub.table;
        out["columns"] = sub.column_order;
        py::list data;
        for (const auto& row : sub.rows) {
          py::list cells;
          for (const auto& cell : row) {
            cells.append(cell.is_null() ? py::object(py::none())
                                        : py::object(py::str(skforge::render_cell(cell))));
          }
          data.append(cells);
        }
        out["rows"] = data;
        out["cluster_ids"] = sub.provenance;
        return out;
      },
      py::arg("db_path"), py::arg("table"), py::arg("clusters_k") = 5,
      py::arg("rows_per_cluster_l") = 2, py::arg("max_numeric_ratio") = 0.5,
      py::arg("value_truncate_len") = 64, py::arg("seed") = 42,
      "Cluster rows and keep the most complete ones per cluster.");

  m.def(
      "sample_cell_values",
      [](const std::string& db_path, const std::string& table, const std::string& column,
         std::size_t n, double max_numeric_ratio, std::size_t truncate) {
        const auto schema = skforge::load_database(db_path);
        const auto rows = skforge::fetch_rows(schema, table);
        auto cfg = sampler_config(5, 2, max_numeric_ratio, truncate, 42);
        return skforge::sample_cell_values(rows, column, n, cfg).values;
      },
      py::arg("db_path"), py::arg("table"), py::arg("column"), py::arg("n") = 10,
      py::arg("max_numeric_ratio") = 0.5, py::arg("value_truncate_len") = 64,
      "Distinct rendered values of a column, numeric share capped.");

  m.def(
      "generate_corpus",
      [](const std::string& db_root, const std::string& output_path,
         const std::string& stats_path, std::optional<std::string> tables_json,
         const std::string& templates_path, std::uint64_t seed, std::size_t jobs,
         const std::string& config_path) {
        auto cfg = config_from_path(config_path);
        if (!db_root.empty()) cfg.db_root = db_root;
        if (tables_json) cfg.tables_json = tables_json;
        if (!templates_path.empty()) cfg.templates_path = templates_path;
        if (!output_path.empty()) cfg.output_path = output_path;
        cfg.stats_path = stats_path;
        cfg.set_seed(seed);
        return json_to_py(skforge::run_generate(cfg, jobs).to_json());
      },
      py::arg("db_root"), py::arg("output_path"), py::arg("stats_path") = "",
      py::arg("tables_json") = py::none(), py::arg("templates_path") = "",
      py::arg("seed") = 42, py::arg("jobs") = 1, py::arg("config_path") = "",
      "Write the nine-task knowledge corpus as JSONL; returns the stats.");

  m.def(
      "parse_sql",
      [](const std::string& text) {
        return json_to_py(skforge::sql::dump_ast(skforge::sql::parse_sql(text)));
      },
      py::arg("sql"), "Parse one statement into a structural AST dict.");

  m.def(
      "canonicalize",
      [](const std::string& text, const std::string& mode) {
        const auto ast = skforge::sql::parse_sql(text);
        const auto canon_mode = mode == "strict" ? skforge::sql::CanonMode::strict
                                                 : skforge::sql::CanonMode::component;
        return skforge::sql::canonical_sql(ast, canon_mode);
      },
      py::arg("sql"), py::arg("mode") = "component",
      "Canonical text of a statement (component or strict).");

  m.def(
      "extract_column_refs",
      [](const std::string& text, const std::string& db_path) {
        const auto ast = skforge::sql::parse_sql(text);
        skforge::DatabaseSchema schema;
        if (!db_path.empty()) schema = skforge::load_database(db_path);
        py::list out;
        for (const auto& ref : skforge::sql::extract_column_refs(ast, schema)) {
          py::dict item;
          item["column"] = ref.column;
          item["table"] = ref.resolved() ? py::object(py::str(ref.table))
                                         : py::object(py::none());
          item["pos"] = ref.pos;
          item["len"] = ref.len;
          out.append(item);
        }
        return out;
      },
      py::arg("sql"), py::arg("db_path") = "",
      "Explicit column references of a statement, alias-resolved when possible.");

  m.def(
      "exact_match",
      [](const std::string& pred, const std::string& gold, const std::string& mode) {
        return skforge::exact_match(
            pred, gold, mode == "strict" ? skforge::EmMode::strict : skforge::EmMode::component);
      },
      py::arg("pred"), py::arg("gold"), py::arg("mode") = "component");

  m.def(
      "execution_match",
      [](const std::string& pred, const std::string& gold, const std::string& db_path,
         double timeout_secs) {
        skforge::SqliteDb db(db_path);
        return skforge::execution_match(
            pred, gold, db,
            std::chrono::milliseconds(static_cast<std::int64_t>(timeout_secs * 1000.0)));
      },
      py::arg("pred"), py::arg("gold"), py::arg("db_path"), py::arg("timeout_secs") = 30.0);

  m.def(
      "evaluate",
      [](const std::string& gold_path, const std::string& preds_path,
         const std::string& db_root, std::optional<std::string> tables_json,
         const std::string& em_mode, double timeout_secs, std::size_t jobs) {
        const auto examples = skforge::load_eval_examples(gold_path, preds_path);
        skforge::EvalConfig cfg;
        cfg.em_mode = em_mode == "strict" ? skforge::EmMode::strict
                                          : skforge::EmMode::component;
        cfg.timeout =
            std::chrono::milliseconds(static_cast<std::int64_t>(timeout_secs * 1000.0));
        cfg.jobs = jobs;
        const auto report = skforge::run_evaluate(examples, db_root, tables_json, cfg);
        py::dict out = json_to_py(report.to_json()).cast<py::dict>();
        py::list verdicts;
        for (const auto& v : report.verdicts) verdicts.append(json_to_py(v.to_json()));
        out["verdicts"] = verdicts;
        return out;
      },
      py::arg("gold_path"), py::arg("preds_path"), py::arg("db_root"),
      py::arg("tables_json") = py::none(), py::arg("em_mode") = "component",
      py::arg("timeout_secs") = 30.0, py::arg("jobs") = 1,
      "Score a prediction file: EM, EX, column accuracy, per-example verdicts.");

  m.def(
      "corpus_stats",
      [](const std::string& corpus_path, const std::string& templates_path) {
        const auto pack = templates_path.empty()
                              ? skforge::TemplatePack::builtin()
                              : skforge::TemplatePack::load_file(templates_path);
        return json_to_py(skforge::run_stats(corpus_path, pack).to_json());
      },
      py::arg("corpus_path"), py::arg("templates_path") = "",
      "Recompute corpus statistics and run file-level health checks.");
}
