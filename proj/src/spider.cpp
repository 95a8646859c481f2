#include "skforge/spider.hpp"

#include <fstream>

#include "skforge/errors.hpp"

namespace skforge {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct GlobalColumn {
  int table_index;
  std::string name;
};

std::vector<GlobalColumn> read_columns(const json& entry, const std::string& db_id) {
  std::vector<GlobalColumn> cols;
  for (const auto& pair : entry.at("column_names_original")) {
    if (!pair.is_array() || pair.size() != 2) {
      throw FormatError(db_id, "column_names_original entry is not a [table, name] pair");
    }
    cols.push_back({pair[0].get<int>(), pair[1].get<std::string>()});
  }
  if (cols.empty() || cols[0].table_index != -1) {
    throw FormatError(db_id, "column index 0 must be the '*' slot");
  }
  return cols;
}

DatabaseSchema parse_entry(const json& entry) {
  std::string db_id;
  try {
    db_id = entry.at("db_id").get<std::string>();

    DatabaseSchema schema;
    schema.db_id = db_id;
    schema.source = SchemaSource::spider_tables_json;

    for (const auto& name : entry.at("table_names_original")) {
      TableSchema table;
      table.name = name.get<std::string>();
      schema.tables.push_back(std::move(table));
    }

    const auto columns = read_columns(entry, db_id);
    const auto& types = entry.at("column_types");
    const json* nullables =
        entry.contains("column_nullables") ? &entry.at("column_nullables") : nullptr;

    for (std::size_t i = 1; i < columns.size(); ++i) {
      const auto& gc = columns[i];
      if (gc.table_index < 0 ||
          static_cast<std::size_t>(gc.table_index) >= schema.tables.size()) {
        throw FormatError(db_id, "column table index out of range");
      }
      ColumnSchema col;
      col.name = gc.name;
      if (i < types.size()) {
        col.declared_type = classify_type(types[i].get<std::string>());
      }
      if (nullables && i < nullables->size()) {
        col.nullable = (*nullables)[i].get<bool>();
      }
      schema.tables[gc.table_index].columns.push_back(std::move(col));
    }

    auto column_at = [&](std::size_t idx) -> std::pair<std::string, std::string> {
      if (idx == 0 || idx >= columns.size()) {
        throw FormatError(db_id, "column index out of range: " + std::to_string(idx));
      }
      const auto& gc = columns[idx];
      return {schema.tables[gc.table_index].name, gc.name};
    };
    auto mutable_table = [&](const std::string& name) -> TableSchema& {
      for (auto& table : schema.tables) {
        if (ident_equal(table.name, name)) return table;
      }
      throw FormatError(db_id, "unknown table: " + name);
    };

    if (entry.contains("primary_keys")) {
      for (const auto& pk : entry.at("primary_keys")) {
        // Composite primary keys appear as nested index lists in some
        // Spider releases.
        std::vector<std::size_t> indices;
        if (pk.is_array()) {
          for (const auto& idx : pk) indices.push_back(idx.get<std::size_t>());
        } else {
          indices.push_back(pk.get<std::size_t>());
        }
        for (std::size_t idx : indices) {
          auto [table, column] = column_at(idx);
          mutable_table(table).primary_key.push_back(column);
        }
      }
    }

    if (entry.contains("foreign_keys")) {
      for (const auto& pair : entry.at("foreign_keys")) {
        if (!pair.is_array() || pair.size() != 2) {
          throw FormatError(db_id, "foreign_keys entry is not an index pair");
        }
        auto [from_table, from_column] = column_at(pair[0].get<std::size_t>());
        auto [to_table, to_column] = column_at(pair[1].get<std::size_t>());
        mutable_table(from_table)
            .foreign_keys.push_back({from_table, from_column, to_table, to_column});
      }
    }

    validate_schema(schema);
    return schema;
  } catch (const json::exception& e) {
    throw FormatError(db_id, std::string("malformed tables.json entry: ") + e.what());
  }
}

}  // namespace

std::vector<DatabaseSchema> parse_spider_tables(const json& doc) {
  if (!doc.is_array()) {
    throw FormatError("", "tables.json top level must be an array");
  }
  std::vector<DatabaseSchema> schemas;
  schemas.reserve(doc.size());
  for (const auto& entry : doc) schemas.push_back(parse_entry(entry));
  return schemas;
}

std::vector<DatabaseSchema> load_spider_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw FormatError("", std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return parse_spider_tables(doc);
}

ordered_json schema_to_spider_entry(const DatabaseSchema& schema) {
  ordered_json entry;
  entry["db_id"] = schema.db_id;

  auto tables = ordered_json::array();
  auto columns = ordered_json::array();
  auto types = ordered_json::array();
  auto nullables = ordered_json::array();
  columns.push_back({-1, "*"});
  types.push_back("text");
  nullables.push_back(true);

  // (table, column) -> global column index, for key serialization
  std::vector<std::vector<std::size_t>> index_of(schema.tables.size());
  std::size_t next = 1;
  for (std::size_t t = 0; t < schema.tables.size(); ++t) {
    tables.push_back(schema.tables[t].name);
    for (const auto& col : schema.tables[t].columns) {
      columns.push_back({static_cast<int>(t), col.name});
      types.push_back(type_to_spider(col.declared_type));
      nullables.push_back(col.nullable);
      index_of[t].push_back(next++);
    }
  }

  auto global_index = [&](const std::string& table, const std::string& column) {
    for (std::size_t t = 0; t < schema.tables.size(); ++t) {
      if (!ident_equal(schema.tables[t].name, table)) continue;
      for (std::size_t c = 0; c < schema.tables[t].columns.size(); ++c) {
        if (ident_equal(schema.tables[t].columns[c].name, column)) {
          return index_of[t][c];
        }
      }
    }
    return std::size_t{0};
  };

  auto primary_keys = ordered_json::array();
  auto foreign_keys = ordered_json::array();
  for (const auto& table : schema.tables) {
    for (const auto& pk : table.primary_key) {
      primary_keys.push_back(global_index(table.name, pk));
    }
    for (const auto& fk : table.foreign_keys) {
      foreign_keys.push_back({global_index(fk.from_table, fk.from_column),
                              global_index(fk.to_table, fk.to_column)});
    }
  }

  entry["table_names_original"] = tables;
  entry["column_names_original"] = columns;
  entry["column_types"] = types;
  entry["column_nullables"] = nullables;
  entry["primary_keys"] = primary_keys;
  entry["foreign_keys"] = foreign_keys;
  return entry;
}

std::string type_to_dump_word(const ColumnType& type) {
  switch (type.kind) {
    case DeclaredType::integer: return "integer";
    case DeclaredType::real: return "real";
    case DeclaredType::text: return "text";
    case DeclaredType::boolean: return "boolean";
    case DeclaredType::datetime: return "datetime";
    case DeclaredType::other: return type.raw;
  }
  return type.raw;
}

ordered_json schema_to_dump(const DatabaseSchema& schema) {
  ordered_json out;
  out["db_id"] = schema.db_id;
  auto tables = ordered_json::array();
  for (const auto& table : schema.tables) {
    ordered_json t;
    t["name"] = table.name;
    auto cols = ordered_json::array();
    for (const auto& col : table.columns) {
      cols.push_back({{"name", col.name}, {"type", type_to_dump_word(col.declared_type)}});
    }
    t["columns"] = cols;
    t["primary_key"] = table.primary_key;
    auto fks = ordered_json::array();
    for (const auto& fk : table.foreign_keys) {
      fks.push_back({{"from_table", fk.from_table},
                     {"from_column", fk.from_column},
                     {"to_table", fk.to_table},
                     {"to_column", fk.to_column}});
    }
    t["foreign_keys"] = fks;
    tables.push_back(std::move(t));
  }
  out["tables"] = tables;
  return out;
}

}  // namespace skforge
