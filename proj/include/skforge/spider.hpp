#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skforge/schema.hpp"

namespace skforge {

// Parses the Spider tables.json layout: db_id, table_names_original,
// column_names_original, column_types, foreign_keys, primary_keys.
// Column index 0 (the "*" slot) is dropped; key index pairs resolve to
// names. An optional column_nullables array (our serializer emits it) is
// honored; plain Spider files default every column to nullable.
std::vector<DatabaseSchema> load_spider_tables(const std::string& path);
std::vector<DatabaseSchema> parse_spider_tables(const nlohmann::json& doc);

// One tables.json entry for a schema; classify_type inverts the emitted
// type tokens, so load(parse(serialize(s))) == s.
nlohmann::ordered_json schema_to_spider_entry(const DatabaseSchema& schema);

// The dump shape used by the extract/stats commands:
// {db_id, tables:[{name, columns:[{name,type}], primary_key, foreign_keys}]}.
nlohmann::ordered_json schema_to_dump(const DatabaseSchema& schema);

std::string type_to_dump_word(const ColumnType& type);

}  // namespace skforge
