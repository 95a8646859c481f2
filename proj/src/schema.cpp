#include "skforge/schema.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "skforge/errors.hpp"

namespace skforge {

std::string ident_lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool ident_equal(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

namespace {

bool contains_ci(const std::string& haystack, const char* needle) {
  const std::string lower = ident_lower(haystack);
  return lower.find(needle) != std::string::npos;
}

}  // namespace

ColumnType classify_type(const std::string& raw) {
  // SQLite type-affinity rules, extended with the Spider metadata
  // vocabulary ("number", "time", "boolean"). First match wins.
  if (contains_ci(raw, "int")) return {DeclaredType::integer, raw};
  if (contains_ci(raw, "char") || contains_ci(raw, "clob") || contains_ci(raw, "text")) {
    return {DeclaredType::text, raw};
  }
  if (contains_ci(raw, "real") || contains_ci(raw, "floa") || contains_ci(raw, "doub") ||
      contains_ci(raw, "number")) {
    return {DeclaredType::real, raw};
  }
  if (contains_ci(raw, "bool")) return {DeclaredType::boolean, raw};
  if (contains_ci(raw, "date") || contains_ci(raw, "time")) {
    return {DeclaredType::datetime, raw};
  }
  return {DeclaredType::other, raw};
}

std::string type_to_spider(const ColumnType& type) {
  switch (type.kind) {
    case DeclaredType::integer: return "integer";
    case DeclaredType::real: return "number";
    case DeclaredType::text: return "text";
    case DeclaredType::boolean: return "boolean";
    case DeclaredType::datetime: return "time";
    case DeclaredType::other: return type.raw;
  }
  return type.raw;
}

std::string type_to_sql_word(const ColumnType& type) {
  switch (type.kind) {
    case DeclaredType::integer: return "INT";
    case DeclaredType::real: return "REAL";
    case DeclaredType::text: return "TEXT";
    case DeclaredType::boolean: return "BOOLEAN";
    case DeclaredType::datetime: return "DATETIME";
    case DeclaredType::other: return type.raw;
  }
  return type.raw;
}

const ColumnSchema* TableSchema::find_column(const std::string& name) const {
  for (const auto& col : columns) {
    if (ident_equal(col.name, name)) return &col;
  }
  return nullptr;
}

const TableSchema* DatabaseSchema::find_table(const std::string& name) const {
  for (const auto& table : tables) {
    if (ident_equal(table.name, name)) return &table;
  }
  return nullptr;
}

bool DatabaseSchema::has_column_anywhere(const std::string& column) const {
  for (const auto& table : tables) {
    if (table.find_column(column)) return true;
  }
  return false;
}

bool schema_equal(const DatabaseSchema& a, const DatabaseSchema& b) {
  if (a.db_id != b.db_id || a.tables.size() != b.tables.size()) return false;
  for (std::size_t t = 0; t < a.tables.size(); ++t) {
    const auto& ta = a.tables[t];
    const auto& tb = b.tables[t];
    if (ta.name != tb.name || ta.primary_key != tb.primary_key ||
        ta.foreign_keys != tb.foreign_keys ||
        ta.columns.size() != tb.columns.size()) {
      return false;
    }
    for (std::size_t c = 0; c < ta.columns.size(); ++c) {
      const auto& ca = ta.columns[c];
      const auto& cb = tb.columns[c];
      if (ca.name != cb.name || !(ca.declared_type == cb.declared_type) ||
          ca.nullable != cb.nullable) {
        return false;
      }
    }
  }
  return true;
}

std::optional<std::size_t> RowSet::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < column_order.size(); ++i) {
    if (ident_equal(column_order[i], name)) return i;
  }
  return std::nullopt;
}

void validate_schema(const DatabaseSchema& schema) {
  std::unordered_set<std::string> table_names;
  for (const auto& table : schema.tables) {
    if (!table_names.insert(ident_lower(table.name)).second) {
      throw SchemaReadError(table.name, "duplicate table name");
    }
    std::unordered_set<std::string> column_names;
    for (const auto& col : table.columns) {
      if (!column_names.insert(ident_lower(col.name)).second) {
        throw SchemaReadError(table.name, "duplicate column name '" + col.name + "'");
      }
    }
    for (const auto& pk : table.primary_key) {
      if (!table.find_column(pk)) {
        throw SchemaReadError(table.name, "primary key column '" + pk + "' not found");
      }
    }
  }
  for (const auto& table : schema.tables) {
    for (const auto& fk : table.foreign_keys) {
      const auto* from_table = schema.find_table(fk.from_table);
      const auto* to_table = schema.find_table(fk.to_table);
      if (!from_table || !from_table->find_column(fk.from_column)) {
        throw SchemaReadError(fk.from_table,
                              "foreign key source '" + fk.from_table + "." +
                                  fk.from_column + "' not found");
      }
      if (!to_table || !to_table->find_column(fk.to_column)) {
        throw SchemaReadError(fk.from_table,
                              "foreign key target '" + fk.to_table + "." +
                                  fk.to_column + "' not found");
      }
      if (ident_equal(fk.from_table, fk.to_table) &&
          ident_equal(fk.from_column, fk.to_column)) {
        throw SchemaReadError(fk.from_table, "foreign key references itself");
      }
    }
  }
}

}  // namespace skforge
