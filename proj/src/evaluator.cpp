#include "skforge/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <thread>

#include "skforge/column_refs.hpp"
#include "skforge/errors.hpp"
#include "skforge/sql_parser.hpp"

namespace skforge {

using nlohmann::ordered_json;

namespace {

enum class ParseStatus { ok, parse_error, unsupported };

ParseStatus try_parse(const std::string& text, std::optional<sql::Query>& out) {
  try {
    out = sql::parse_sql(text);
    return ParseStatus::ok;
  } catch (const UnsupportedFeatureError&) {
    return ParseStatus::unsupported;
  } catch (const ParseError&) {
    return ParseStatus::parse_error;
  }
}

// --- result comparison -----------------------------------------------------

bool numeric_cell(const Cell& c, double& out) {
  if (const auto* i = std::get_if<std::int64_t>(&c.data)) {
    out = static_cast<double>(*i);
    return true;
  }
  if (const auto* d = std::get_if<double>(&c.data)) {
    out = *d;
    return true;
  }
  return false;
}

constexpr double kFloatTolerance = 1e-6;

bool cells_equal(const Cell& a, const Cell& b) {
  if (a.is_null() || b.is_null()) return a.is_null() && b.is_null();
  double x, y;
  if (numeric_cell(a, x) && numeric_cell(b, y)) {
    if (a.is_integer() && b.is_integer()) return x == y;
    return std::fabs(x - y) <= kFloatTolerance * std::max({1.0, std::fabs(x), std::fabs(y)});
  }
  return a == b;
}

// Total order used only to align the two multisets before the tolerant
// pairwise comparison.
int cell_rank(const Cell& c) {
  if (c.is_null()) return 0;
  if (c.is_integer() || c.is_real()) return 1;
  if (c.is_text()) return 2;
  return 3;
}

bool cell_less(const Cell& a, const Cell& b) {
  const int ra = cell_rank(a), rb = cell_rank(b);
  if (ra != rb) return ra < rb;
  switch (ra) {
    case 0: return false;
    case 1: {
      double x = 0, y = 0;
      numeric_cell(a, x);
      numeric_cell(b, y);
      return x < y;
    }
    case 2: return std::get<std::string>(a.data) < std::get<std::string>(b.data);
    default: return std::get<Cell::Blob>(a.data).bytes < std::get<Cell::Blob>(b.data).bytes;
  }
}

bool row_less(const std::vector<Cell>& a, const std::vector<Cell>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), cell_less);
}

bool rows_equal(const std::vector<Cell>& a, const std::vector<Cell>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!cells_equal(a[i], b[i])) return false;
  }
  return true;
}

bool results_equal(std::vector<std::vector<Cell>> a, std::vector<std::vector<Cell>> b,
                   bool ordered) {
  if (a.size() != b.size()) return false;
  if (!ordered) {
    std::sort(a.begin(), a.end(), row_less);
    std::sort(b.begin(), b.end(), row_less);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!rows_equal(a[i], b[i])) return false;
  }
  return true;
}

bool gold_is_ordered(const std::string& gold) {
  std::optional<sql::Query> ast;
  if (try_parse(gold, ast) != ParseStatus::ok) return false;
  return !ast->order_by.empty();
}

}  // namespace

bool exact_match(const std::string& pred, const std::string& gold, EmMode mode) {
  std::optional<sql::Query> pred_ast, gold_ast;
  if (try_parse(pred, pred_ast) != ParseStatus::ok) return false;
  if (try_parse(gold, gold_ast) != ParseStatus::ok) return false;
  const auto canon_mode =
      mode == EmMode::component ? sql::CanonMode::component : sql::CanonMode::strict;
  return sql::canonical_sql(*pred_ast, canon_mode) ==
         sql::canonical_sql(*gold_ast, canon_mode);
}

ExecVerdict execution_verdict(const std::string& pred, const std::string& gold,
                              SqliteDb& db, std::chrono::milliseconds timeout) {
  const ExecOutcome gold_out = execute_query(db, gold, timeout);
  if (gold_out.status != ExecStatus::ok) return ExecVerdict::gold_error;

  const ExecOutcome pred_out = execute_query(db, pred, timeout);
  if (pred_out.status == ExecStatus::timeout) return ExecVerdict::pred_timeout;
  if (pred_out.status != ExecStatus::ok) return ExecVerdict::pred_error;

  const bool ordered = gold_is_ordered(gold);
  return results_equal(pred_out.result.rows, gold_out.result.rows, ordered)
             ? ExecVerdict::match
             : ExecVerdict::mismatch;
}

bool execution_match(const std::string& pred, const std::string& gold, SqliteDb& db,
                     std::chrono::milliseconds timeout) {
  return execution_verdict(pred, gold, db, timeout) == ExecVerdict::match;
}

ColumnAccuracy column_accuracy(const std::vector<EvalExample>& examples,
                               const std::map<std::string, DatabaseSchema>& schemas) {
  ColumnAccuracy acc;
  for (const auto& example : examples) {
    const auto schema = schemas.find(example.db_id);
    if (schema == schemas.end()) continue;
    std::optional<sql::Query> ast;
    if (try_parse(example.predicted_sql, ast) != ParseStatus::ok) continue;
    for (const auto& ref : sql::extract_column_refs(*ast, schema->second)) {
      ++acc.total;
      if (schema->second.has_column_anywhere(ref.column)) ++acc.correct;
    }
  }
  return acc;
}

std::string locate_database(const std::string& db_root, const std::string& db_id) {
  namespace fs = std::filesystem;
  const fs::path root(db_root);
  for (const char* ext : {".sqlite", ".db"}) {
    const fs::path nested = root / db_id / (db_id + ext);
    if (fs::exists(nested)) return nested.string();
    const fs::path flat = root / (db_id + ext);
    if (fs::exists(flat)) return flat.string();
  }
  return {};
}

ordered_json ExampleVerdict::to_json() const {
  ordered_json j;
  j["index"] = index;
  j["em"] = em;
  j["ex"] = ex;
  j["col_refs_total"] = col_refs_total;
  j["col_refs_valid"] = col_refs_valid;
  j["failure_kind"] = failure_kind;
  return j;
}

ordered_json EvalReport::to_json() const {
  ordered_json j;
  j["n"] = n;
  j["em_rate"] = em_rate ? ordered_json(*em_rate) : ordered_json(nullptr);
  j["ex_rate"] = ex_rate ? ordered_json(*ex_rate) : ordered_json(nullptr);
  ordered_json acc;
  acc["correct"] = column.correct;
  acc["total"] = column.total;
  acc["rate"] = column.rate() ? ordered_json(*column.rate()) : ordered_json(nullptr);
  j["column_accuracy"] = acc;
  ordered_json tally_json;
  tally_json["parse_error"] = tally.parse_error;
  tally_json["exec_error_pred"] = tally.exec_error_pred;
  tally_json["exec_error_gold"] = tally.exec_error_gold;
  tally_json["unsupported"] = tally.unsupported;
  tally_json["missing_database"] = tally.missing_database;
  j["error_tally"] = tally_json;
  return j;
}

namespace {

ExampleVerdict score_example(std::size_t index, const EvalExample& example,
                             const std::map<std::string, DatabaseSchema>& schemas,
                             const std::string& db_root, const EvalConfig& cfg) {
  ExampleVerdict v;
  v.index = index;

  std::optional<sql::Query> pred_ast, gold_ast;
  const ParseStatus pred_parse = try_parse(example.predicted_sql, pred_ast);
  const ParseStatus gold_parse = try_parse(example.gold_sql, gold_ast);

  if (pred_parse == ParseStatus::ok && gold_parse == ParseStatus::ok) {
    const auto canon_mode = cfg.em_mode == EmMode::component ? sql::CanonMode::component
                                                             : sql::CanonMode::strict;
    v.em = sql::canonical_sql(*pred_ast, canon_mode) ==
           sql::canonical_sql(*gold_ast, canon_mode);
  } else if (pred_parse == ParseStatus::parse_error ||
             gold_parse == ParseStatus::parse_error) {
    v.failure_kind = "parse_error";
  } else {
    v.failure_kind = "unsupported";
  }

  const auto schema = schemas.find(example.db_id);
  if (pred_parse == ParseStatus::ok && schema != schemas.end()) {
    for (const auto& ref : sql::extract_column_refs(*pred_ast, schema->second)) {
      ++v.col_refs_total;
      if (schema->second.has_column_anywhere(ref.column)) ++v.col_refs_valid;
    }
  }

  const std::string db_path = locate_database(db_root, example.db_id);
  if (db_path.empty()) {
    v.ex_counted = false;
    if (v.failure_kind.empty()) v.failure_kind = "missing_database";
    return v;
  }

  try {
    SqliteDb db(db_path);
    switch (execution_verdict(example.predicted_sql, example.gold_sql, db, cfg.timeout)) {
      case ExecVerdict::match:
        v.ex = true;
        break;
      case ExecVerdict::mismatch:
        break;
      case ExecVerdict::pred_error:
      case ExecVerdict::pred_timeout:
        if (v.failure_kind.empty()) v.failure_kind = "exec_error_pred";
        break;
      case ExecVerdict::gold_error:
        // Dataset defect, not a model failure; drop from the denominator.
        v.ex_counted = false;
        if (v.failure_kind.empty()) v.failure_kind = "exec_error_gold";
        break;
    }
  } catch (const Error&) {
    v.ex_counted = false;
    if (v.failure_kind.empty()) v.failure_kind = "missing_database";
  }
  return v;
}

}  // namespace

EvalReport evaluate(const std::vector<EvalExample>& examples,
                    const std::map<std::string, DatabaseSchema>& schemas,
                    const std::string& db_root, const EvalConfig& cfg) {
  EvalReport report;
  report.n = examples.size();
  report.verdicts.resize(examples.size());

  const std::size_t jobs = std::max<std::size_t>(1, cfg.jobs);
  if (jobs == 1 || examples.size() <= 1) {
    for (std::size_t i = 0; i < examples.size(); ++i) {
      report.verdicts[i] = score_example(i, examples[i], schemas, db_root, cfg);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const std::size_t n_workers = std::min(jobs, examples.size());
    workers.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
      workers.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= examples.size()) break;
          report.verdicts[i] = score_example(i, examples[i], schemas, db_root, cfg);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }

  std::size_t em_hits = 0, ex_hits = 0, ex_counted = 0;
  for (const auto& v : report.verdicts) {
    if (v.em) ++em_hits;
    if (v.ex_counted) {
      ++ex_counted;
      if (v.ex) ++ex_hits;
    }
    report.column.total += v.col_refs_total;
    report.column.correct += v.col_refs_valid;
    if (v.failure_kind == "parse_error") ++report.tally.parse_error;
    if (v.failure_kind == "unsupported") ++report.tally.unsupported;
    if (v.failure_kind == "exec_error_pred") ++report.tally.exec_error_pred;
    if (v.failure_kind == "exec_error_gold") ++report.tally.exec_error_gold;
    if (v.failure_kind == "missing_database") ++report.tally.missing_database;
  }
  if (report.n > 0) {
    report.em_rate = static_cast<double>(em_hits) / static_cast<double>(report.n);
  }
  if (ex_counted > 0) {
    report.ex_rate = static_cast<double>(ex_hits) / static_cast<double>(ex_counted);
  }
  return report;
}

}  // namespace skforge
