#include "skforge/database.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <utility>

#include "skforge/errors.hpp"

namespace skforge {

namespace {

std::string quote_ident(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Cell column_cell(sqlite3_stmt* stmt, int col) {
  switch (sqlite3_column_type(stmt, col)) {
    case SQLITE_NULL:
      return Cell::null();
    case SQLITE_INTEGER:
      return Cell::integer(sqlite3_column_int64(stmt, col));
    case SQLITE_FLOAT:
      return Cell::real(sqlite3_column_double(stmt, col));
    case SQLITE_BLOB: {
      const auto* data = static_cast<const std::uint8_t*>(sqlite3_column_blob(stmt, col));
      const int n = sqlite3_column_bytes(stmt, col);
      return Cell::blob(std::vector<std::uint8_t>(data, data + n));
    }
    default: {
      const auto* text = sqlite3_column_text(stmt, col);
      const int n = sqlite3_column_bytes(stmt, col);
      return Cell::text(std::string(reinterpret_cast<const char*>(text),
                                    static_cast<std::size_t>(n)));
    }
  }
}

class Statement {
 public:
  Statement(sqlite3* db, const std::string& sql) {
    if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt_, nullptr) != SQLITE_OK) {
      error_ = sqlite3_errmsg(db);
    }
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  bool ok() const { return stmt_ != nullptr; }
  const std::string& error() const { return error_; }
  sqlite3_stmt* get() const { return stmt_; }

 private:
  sqlite3_stmt* stmt_ = nullptr;
  std::string error_;
};

}  // namespace

SqliteDb::SqliteDb(const std::string& path) : path_(path) {
  if (!std::filesystem::exists(path)) throw FileNotFoundError(path);
  if (sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READONLY, nullptr) != SQLITE_OK) {
    const std::string msg = db_ ? sqlite3_errmsg(db_) : "open failed";
    sqlite3_close(db_);
    db_ = nullptr;
    throw NotADatabaseError(path + " (" + msg + ")");
  }
  // sqlite3_open succeeds on arbitrary bytes; the header is only checked
  // on first access.
  Statement probe(db_, "SELECT count(*) FROM sqlite_master");
  if (!probe.ok()) {
    const std::string msg = probe.error();
    sqlite3_close(db_);
    db_ = nullptr;
    throw NotADatabaseError(path + " (" + msg + ")");
  }
  sqlite3_step(probe.get());
}

SqliteDb::~SqliteDb() { sqlite3_close(db_); }

SqliteDb::SqliteDb(SqliteDb&& other) noexcept
    : db_(std::exchange(other.db_, nullptr)), path_(std::move(other.path_)) {}

SqliteDb& SqliteDb::operator=(SqliteDb&& other) noexcept {
  if (this != &other) {
    sqlite3_close(db_);
    db_ = std::exchange(other.db_, nullptr);
    path_ = std::move(other.path_);
  }
  return *this;
}

ExecOutcome execute_query(SqliteDb& db, const std::string& sql,
                          std::chrono::milliseconds timeout) {
  ExecOutcome out;
  struct Deadline {
    std::chrono::steady_clock::time_point at;
    bool hit = false;
  } deadline;
  if (timeout.count() > 0) {
    deadline.at = std::chrono::steady_clock::now() + timeout;
    sqlite3_progress_handler(
        db.raw(), 1000,
        [](void* ctx) -> int {
          auto* d = static_cast<Deadline*>(ctx);
          if (std::chrono::steady_clock::now() >= d->at) {
            d->hit = true;
            return 1;
          }
          return 0;
        },
        &deadline);
  }

  Statement stmt(db.raw(), sql);
  if (!stmt.ok()) {
    out.status = ExecStatus::error;
    out.error = stmt.error();
    sqlite3_progress_handler(db.raw(), 0, nullptr, nullptr);
    return out;
  }

  const int ncols = sqlite3_column_count(stmt.get());
  for (int i = 0; i < ncols; ++i) {
    const char* name = sqlite3_column_name(stmt.get(), i);
    out.result.column_names.emplace_back(name ? name : "");
  }

  int rc;
  while ((rc = sqlite3_step(stmt.get())) == SQLITE_ROW) {
    std::vector<Cell> row;
    row.reserve(ncols);
    for (int i = 0; i < ncols; ++i) row.push_back(column_cell(stmt.get(), i));
    out.result.rows.push_back(std::move(row));
  }
  sqlite3_progress_handler(db.raw(), 0, nullptr, nullptr);

  if (rc != SQLITE_DONE) {
    out.status = deadline.hit ? ExecStatus::timeout : ExecStatus::error;
    out.error = sqlite3_errmsg(db.raw());
    out.result = {};
  }
  return out;
}

namespace {

std::vector<std::string> list_tables(SqliteDb& db) {
  auto out = execute_query(
      db, "SELECT name FROM sqlite_master WHERE type = 'table' AND name NOT LIKE 'sqlite_%'");
  if (out.status != ExecStatus::ok) {
    throw SchemaReadError("sqlite_master", out.error);
  }
  std::vector<std::string> names;
  for (const auto& row : out.result.rows) {
    if (const auto* s = std::get_if<std::string>(&row[0].data)) names.push_back(*s);
  }
  return names;
}

TableSchema read_table_schema(SqliteDb& db, const std::string& name) {
  TableSchema table;
  table.name = name;

  auto info = execute_query(db, "PRAGMA table_info(" + quote_ident(name) + ")");
  if (info.status != ExecStatus::ok) throw SchemaReadError(name, info.error);
  // columns: cid, name, type, notnull, dflt_value, pk
  std::map<std::int64_t, std::string> pk_by_rank;
  for (const auto& row : info.result.rows) {
    ColumnSchema col;
    if (const auto* s = std::get_if<std::string>(&row[1].data)) col.name = *s;
    std::string raw_type;
    if (const auto* s = std::get_if<std::string>(&row[2].data)) raw_type = *s;
    col.declared_type = classify_type(raw_type);
    if (const auto* n = std::get_if<std::int64_t>(&row[3].data)) col.nullable = (*n == 0);
    if (const auto* pk = std::get_if<std::int64_t>(&row[5].data); pk && *pk > 0) {
      pk_by_rank[*pk] = col.name;
    }
    table.columns.push_back(std::move(col));
  }
  for (const auto& [rank, col] : pk_by_rank) table.primary_key.push_back(col);

  auto fks = execute_query(db, "PRAGMA foreign_key_list(" + quote_ident(name) + ")");
  if (fks.status != ExecStatus::ok) throw SchemaReadError(name, fks.error);
  // columns: id, seq, table, from, to, on_update, on_delete, match
  for (const auto& row : fks.result.rows) {
    ForeignKey fk;
    fk.from_table = name;
    if (const auto* s = std::get_if<std::string>(&row[2].data)) fk.to_table = *s;
    if (const auto* s = std::get_if<std::string>(&row[3].data)) fk.from_column = *s;
    if (const auto* s = std::get_if<std::string>(&row[4].data)) fk.to_column = *s;
    table.foreign_keys.push_back(std::move(fk));
  }
  return table;
}

}  // namespace

DatabaseSchema load_database(const std::string& path) {
  SqliteDb db(path);

  DatabaseSchema schema;
  schema.db_id = std::filesystem::path(path).stem().string();
  schema.source = SchemaSource::db_file;
  schema.file_path = path;

  for (const auto& name : list_tables(db)) {
    schema.tables.push_back(read_table_schema(db, name));
  }

  // Composite foreign keys arrive as one record per column pair; a `to`
  // column left empty references the target's primary key by position.
  for (auto& table : schema.tables) {
    std::size_t seq_in_run = 0;
    std::string run_target;
    for (auto& fk : table.foreign_keys) {
      if (ident_equal(fk.to_table, run_target)) {
        ++seq_in_run;
      } else {
        run_target = fk.to_table;
        seq_in_run = 0;
      }
      if (fk.to_column.empty()) {
        const auto* target = schema.find_table(fk.to_table);
        if (target && seq_in_run < target->primary_key.size()) {
          fk.to_column = target->primary_key[seq_in_run];
        }
      }
    }
  }

  validate_schema(schema);
  return schema;
}

RowSet fetch_rows(const DatabaseSchema& db, const std::string& table,
                  std::optional<std::size_t> limit) {
  const auto* ts = db.find_table(table);
  if (!ts) throw UnknownTableError(table);
  if (db.file_path.empty()) {
    throw DatabaseUnavailableError(db.db_id);
  }

  SqliteDb handle(db.file_path);
  std::string sql = "SELECT * FROM " + quote_ident(ts->name);
  if (limit) sql += " LIMIT " + std::to_string(*limit);

  auto out = execute_query(handle, sql);
  if (out.status != ExecStatus::ok) {
    throw RowReadError("row read failed for table '" + table + "': " + out.error);
  }

  RowSet rows;
  rows.table = ts->name;
  rows.column_order = out.result.column_names;
  rows.rows = std::move(out.result.rows);
  return rows;
}

}  // namespace skforge
