#pragma once

#include <string>
#include <vector>

#include "skforge/schema.hpp"
#include "skforge/sql_ast.hpp"

namespace skforge::sql {

// One explicit column identifier occurrence in a query. `table` is the
// resolved real table name, empty when resolution failed; unresolvable
// references are kept, never dropped.
struct ColumnRef {
  std::string table;
  std::string column;
  std::size_t pos = 0;
  std::size_t len = 0;

  bool resolved() const { return !table.empty(); }
};

// Every explicit column identifier in any clause, subqueries included,
// once per occurrence and in traversal order. `*` and COUNT(*) produce
// no reference. The schema drives alias/table resolution only; it never
// filters.
std::vector<ColumnRef> extract_column_refs(const Query& query,
                                           const DatabaseSchema& schema);

}  // namespace skforge::sql
