#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skforge/value.hpp"

namespace skforge {

// Declared column types collapse onto a small enum via SQLite-affinity
// style prefix rules; anything unrecognized keeps its raw spelling.
enum class DeclaredType { integer, real, text, boolean, datetime, other };

struct ColumnType {
  DeclaredType kind = DeclaredType::other;
  std::string raw;  // original spelling, always preserved

  bool operator==(const ColumnType& o) const {
    if (kind != o.kind) return false;
    return kind != DeclaredType::other || raw == o.raw;
  }
};

// Maps a raw storage type onto the enum. Total: unknown strings map to
// other with the raw spelling kept verbatim.
ColumnType classify_type(const std::string& raw);

// The token used when re-serializing to Spider metadata. Chosen so that
// classify_type inverts it exactly.
std::string type_to_spider(const ColumnType& type);

// The SQL-style word used in training answers (INT, TEXT, ...); `other`
// renders its raw spelling verbatim.
std::string type_to_sql_word(const ColumnType& type);

struct ColumnSchema {
  std::string name;
  ColumnType declared_type;
  bool nullable = true;
};

struct ForeignKey {
  std::string from_table;
  std::string from_column;
  std::string to_table;
  std::string to_column;
  bool operator==(const ForeignKey&) const = default;
};

struct TableSchema {
  std::string name;
  std::vector<ColumnSchema> columns;
  std::vector<std::string> primary_key;
  std::vector<ForeignKey> foreign_keys;

  const ColumnSchema* find_column(const std::string& name) const;
};

enum class SchemaSource { db_file, spider_tables_json };

struct DatabaseSchema {
  std::string db_id;
  std::vector<TableSchema> tables;
  SchemaSource source = SchemaSource::db_file;
  // Set when the schema is backed by an openable database file; empty for
  // metadata-only schemas. Row access requires it.
  std::string file_path;

  const TableSchema* find_table(const std::string& name) const;
  bool has_column_anywhere(const std::string& column) const;
};

// Logical equality: same db_id, tables, columns, keys. Provenance
// (source, file_path) is deliberately ignored so a metadata round trip
// can compare equal to the file-loaded original.
bool schema_equal(const DatabaseSchema& a, const DatabaseSchema& b);

// Case-insensitive ASCII identifier comparison; SQL identifiers compare
// case-insensitively but original casing is preserved everywhere else.
bool ident_equal(const std::string& a, const std::string& b);
std::string ident_lower(const std::string& s);

struct RowSet {
  std::string table;
  std::vector<std::string> column_order;
  std::vector<std::vector<Cell>> rows;

  std::optional<std::size_t> column_index(const std::string& name) const;
};

// Checks the structural invariants (unique names, resolvable foreign
// keys); throws SchemaReadError naming the offending table.
void validate_schema(const DatabaseSchema& schema);

}  // namespace skforge
