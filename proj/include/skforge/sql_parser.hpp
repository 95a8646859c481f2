#pragma once

#include <string>

#include "skforge/sql_ast.hpp"

namespace skforge::sql {

// Parses one statement of the supported dialect: SELECT/DISTINCT,
// aggregates, arithmetic, FROM with INNER JOIN/ON, WHERE with
// AND/OR/NOT/comparisons/BETWEEN/IN/LIKE/IS NULL, nested subqueries,
// GROUP BY, HAVING, ORDER BY ASC|DESC, LIMIT, UNION/INTERSECT/EXCEPT.
// Throws ParseError for malformed text and UnsupportedFeatureError for
// recognizable out-of-dialect constructs; never silently misparses.
Query parse_sql(const std::string& text);

}  // namespace skforge::sql
