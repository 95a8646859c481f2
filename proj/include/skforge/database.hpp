#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "skforge/schema.hpp"

struct sqlite3;

namespace skforge {

// Read-only handle on a SQLite file. One handle must not be shared across
// threads; callers open per-thread handles.
class SqliteDb {
 public:
  explicit SqliteDb(const std::string& path);
  ~SqliteDb();

  SqliteDb(const SqliteDb&) = delete;
  SqliteDb& operator=(const SqliteDb&) = delete;
  SqliteDb(SqliteDb&& other) noexcept;
  SqliteDb& operator=(SqliteDb&& other) noexcept;

  const std::string& path() const { return path_; }
  sqlite3* raw() const { return db_; }

 private:
  sqlite3* db_ = nullptr;
  std::string path_;
};

struct QueryResult {
  std::vector<std::string> column_names;
  std::vector<std::vector<Cell>> rows;
};

enum class ExecStatus { ok, error, timeout };

struct ExecOutcome {
  ExecStatus status = ExecStatus::ok;
  QueryResult result;
  std::string error;
};

// Executes arbitrary SQL text read-only; never throws on SQL errors, the
// outcome carries them. A zero timeout means no limit.
ExecOutcome execute_query(SqliteDb& db, const std::string& sql,
                          std::chrono::milliseconds timeout = {});

// Introspects a database file into the uniform schema model. Table,
// column and key order follow storage order.
DatabaseSchema load_database(const std::string& path);

// All rows of `table` in storage order, cells tagged by runtime type.
// nullopt limit fetches everything.
RowSet fetch_rows(const DatabaseSchema& db, const std::string& table,
                  std::optional<std::size_t> limit = std::nullopt);

}  // namespace skforge
