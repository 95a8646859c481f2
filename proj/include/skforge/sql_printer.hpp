#pragma once

#include <string>

#include "skforge/sql_ast.hpp"

namespace skforge::sql {

// strict: identifiers case-folded, aliases renamed positionally (t1, t2
//   in FROM order), literals normalized; every order preserved.
// component: additionally treats commutative structure as sets: select
//   items, AND chains and IN lists sort lexicographically, FROM tables
//   sort with their join conditions merged, aliases resolve to table
//   names, and symmetric comparisons order their operands.
enum class CanonMode { strict, component };

// Structure-preserving SQL text: printing and reparsing yields a
// structurally equal tree.
std::string print_sql(const Query& query);

// Canonical text for exact-match comparison; idempotent under
// parse + canonicalize.
std::string canonical_sql(const Query& query, CanonMode mode);

}  // namespace skforge::sql
