#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skforge/database.hpp"
#include "skforge/schema.hpp"
#include "skforge/sql_printer.hpp"

namespace skforge {

struct EvalExample {
  std::string db_id;
  std::string question;
  std::string gold_sql;
  std::string predicted_sql;
};

enum class EmMode { component, strict };

struct EvalConfig {
  EmMode em_mode = EmMode::component;
  std::chrono::milliseconds timeout = std::chrono::seconds(30);
  std::size_t jobs = 1;
};

// Exact match over canonical forms. Component mode treats select items,
// AND chains, IN lists and FROM tables as unordered sets; strict mode
// preserves order. Either side failing to parse scores false.
bool exact_match(const std::string& pred, const std::string& gold, EmMode mode);

enum class ExecVerdict { match, mismatch, pred_error, pred_timeout, gold_error };

// Runs both queries read-only and compares results as multisets of rows
// (ordered when the gold query has a top-level ORDER BY). Floats compare
// with 1e-6 tolerance; NULL equals NULL.
ExecVerdict execution_verdict(const std::string& pred, const std::string& gold,
                              SqliteDb& db, std::chrono::milliseconds timeout);
bool execution_match(const std::string& pred, const std::string& gold, SqliteDb& db,
                     std::chrono::milliseconds timeout);

// C_total counts the column references of every parseable prediction;
// C_correct those whose column name exists anywhere in the example's
// schema (case-insensitive). 0/0 is undefined, not 1.
struct ColumnAccuracy {
  std::size_t correct = 0;
  std::size_t total = 0;
  std::optional<double> rate() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(total);
  }
};

ColumnAccuracy column_accuracy(const std::vector<EvalExample>& examples,
                               const std::map<std::string, DatabaseSchema>& schemas);

struct ExampleVerdict {
  std::size_t index = 0;
  bool em = false;
  bool ex = false;
  bool ex_counted = true;  // false: excluded from the EX denominator
  std::size_t col_refs_total = 0;
  std::size_t col_refs_valid = 0;
  std::string failure_kind;  // empty when clean

  nlohmann::ordered_json to_json() const;
};

struct ErrorTally {
  std::size_t parse_error = 0;
  std::size_t exec_error_pred = 0;
  std::size_t exec_error_gold = 0;
  std::size_t unsupported = 0;
  std::size_t missing_database = 0;
};

struct EvalReport {
  std::size_t n = 0;
  std::optional<double> em_rate;
  std::optional<double> ex_rate;
  ColumnAccuracy column;
  ErrorTally tally;
  std::vector<ExampleVerdict> verdicts;

  nlohmann::ordered_json to_json() const;  // without per-example verdicts
};

// Locates db_root/<db_id>/<db_id>.sqlite (or .db); empty when absent.
std::string locate_database(const std::string& db_root, const std::string& db_id);

// Scores every example; examples run independently (cfg.jobs workers,
// each on its own database handle) and the report is assembled in index
// order, so results do not depend on the worker count.
EvalReport evaluate(const std::vector<EvalExample>& examples,
                    const std::map<std::string, DatabaseSchema>& schemas,
                    const std::string& db_root, const EvalConfig& cfg);

}  // namespace skforge
