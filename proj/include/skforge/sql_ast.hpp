#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace skforge::sql {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Query;
using QueryPtr = std::unique_ptr<Query>;

// Column reference as written: optional qualifier (alias or table name)
// plus the column identifier. `pos`/`len` span the column token in the
// source text.
struct ColumnRefExpr {
  std::string qualifier;
  std::string column;
  std::size_t pos = 0;
  std::size_t len = 0;
};

struct StarExpr {
  std::string qualifier;  // "t.*" keeps its qualifier
};

enum class LiteralKind { number, string, null };

struct LiteralExpr {
  LiteralKind kind = LiteralKind::null;
  std::string text;  // number: verbatim token; string: unescaped content
};

enum class BinaryOp { eq, ne, lt, le, gt, ge, add, sub, mul, div, logical_and, logical_or };

struct BinaryExpr {
  BinaryOp op = BinaryOp::eq;
  ExprPtr lhs;
  ExprPtr rhs;
};

enum class UnaryOp { negate, logical_not };

struct UnaryExpr {
  UnaryOp op = UnaryOp::negate;
  ExprPtr operand;
};

enum class AggFunc { count, sum, avg, min, max };

struct AggExpr {
  AggFunc fn = AggFunc::count;
  bool distinct = false;
  bool star = false;  // COUNT(*)
  ExprPtr arg;        // null when star
};

struct BetweenExpr {
  bool negated = false;
  ExprPtr value;
  ExprPtr low;
  ExprPtr high;
};

struct InExpr {
  bool negated = false;
  ExprPtr value;
  std::vector<ExprPtr> list;  // empty when subquery is set
  QueryPtr subquery;
};

struct LikeExpr {
  bool negated = false;
  ExprPtr value;
  ExprPtr pattern;
};

struct IsNullExpr {
  bool negated = false;
  ExprPtr value;
};

struct SubqueryExpr {
  QueryPtr query;
};

struct Expr {
  std::variant<ColumnRefExpr, StarExpr, LiteralExpr, BinaryExpr, UnaryExpr, AggExpr,
               BetweenExpr, InExpr, LikeExpr, IsNullExpr, SubqueryExpr>
      node;
};

struct SelectItem {
  ExprPtr expr;
  std::string alias;  // optional AS alias
};

// Plain table or parenthesized subquery, with an optional alias.
struct TableRef {
  std::string table;  // empty when subquery is set
  std::string alias;
  QueryPtr subquery;
};

struct JoinClause {
  TableRef target;
  ExprPtr on;  // may be null (bare JOIN / comma join)
};

struct OrderItem {
  ExprPtr expr;
  bool desc = false;
};

struct SelectCore {
  bool distinct = false;
  std::vector<SelectItem> items;
  std::optional<TableRef> from;
  std::vector<JoinClause> joins;
  ExprPtr where;
  std::vector<ExprPtr> group_by;
  ExprPtr having;
};

enum class SetOp { union_distinct, union_all, intersect, except };

// Either a single SELECT or a set operation over two queries. ORDER BY
// and LIMIT attach to the outermost node of a compound.
struct Query {
  std::optional<SetOp> set_op;  // engaged => left/right hold the operands
  QueryPtr left;
  QueryPtr right;
  SelectCore core;  // valid when !set_op

  std::vector<OrderItem> order_by;
  std::optional<long long> limit;

  bool is_select() const { return !set_op.has_value(); }
};

// Structural dump for inspection and equality checks; source spans are
// deliberately omitted so printed-and-reparsed trees compare equal.
nlohmann::ordered_json dump_ast(const Query& query);
nlohmann::ordered_json dump_ast(const Expr& expr);

bool ast_equal(const Query& a, const Query& b);

const char* set_op_name(SetOp op);
const char* agg_func_name(AggFunc fn);
const char* binary_op_symbol(BinaryOp op);

}  // namespace skforge::sql
