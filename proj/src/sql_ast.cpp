#include "skforge/sql_ast.hpp"

namespace skforge::sql {

using nlohmann::ordered_json;

const char* set_op_name(SetOp op) {
  switch (op) {
    case SetOp::union_distinct: return "UNION";
    case SetOp::union_all: return "UNION ALL";
    case SetOp::intersect: return "INTERSECT";
    case SetOp::except: return "EXCEPT";
  }
  return "UNION";
}

const char* agg_func_name(AggFunc fn) {
  switch (fn) {
    case AggFunc::count: return "count";
    case AggFunc::sum: return "sum";
    case AggFunc::avg: return "avg";
    case AggFunc::min: return "min";
    case AggFunc::max: return "max";
  }
  return "count";
}

const char* binary_op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::eq: return "=";
    case BinaryOp::ne: return "!=";
    case BinaryOp::lt: return "<";
    case BinaryOp::le: return "<=";
    case BinaryOp::gt: return ">";
    case BinaryOp::ge: return ">=";
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::logical_and: return "AND";
    case BinaryOp::logical_or: return "OR";
  }
  return "=";
}

namespace {

ordered_json dump_table_ref(const TableRef& ref) {
  ordered_json j;
  if (ref.subquery) {
    j["subquery"] = dump_ast(*ref.subquery);
  } else {
    j["table"] = ref.table;
  }
  if (!ref.alias.empty()) j["alias"] = ref.alias;
  return j;
}

}  // namespace

ordered_json dump_ast(const Expr& expr) {
  struct Visitor {
    ordered_json operator()(const ColumnRefExpr& ref) const {
      ordered_json j{{"node", "column"}, {"column", ref.column}};
      if (!ref.qualifier.empty()) j["qualifier"] = ref.qualifier;
      return j;
    }
    ordered_json operator()(const StarExpr& star) const {
      ordered_json j{{"node", "star"}};
      if (!star.qualifier.empty()) j["qualifier"] = star.qualifier;
      return j;
    }
    ordered_json operator()(const LiteralExpr& lit) const {
      const char* kind = lit.kind == LiteralKind::number   ? "number"
                         : lit.kind == LiteralKind::string ? "string"
                                                           : "null";
      return ordered_json{{"node", "literal"}, {"kind", kind}, {"text", lit.text}};
    }
    ordered_json operator()(const BinaryExpr& bin) const {
      return ordered_json{{"node", "binary"},
                          {"op", binary_op_symbol(bin.op)},
                          {"lhs", dump_ast(*bin.lhs)},
                          {"rhs", dump_ast(*bin.rhs)}};
    }
    ordered_json operator()(const UnaryExpr& u) const {
      return ordered_json{{"node", "unary"},
                          {"op", u.op == UnaryOp::negate ? "-" : "NOT"},
                          {"operand", dump_ast(*u.operand)}};
    }
    ordered_json operator()(const AggExpr& agg) const {
      ordered_json j{{"node", "aggregate"},
                     {"fn", agg_func_name(agg.fn)},
                     {"distinct", agg.distinct}};
      if (agg.star) {
        j["star"] = true;
      } else {
        j["arg"] = dump_ast(*agg.arg);
      }
      return j;
    }
    ordered_json operator()(const BetweenExpr& b) const {
      return ordered_json{{"node", "between"},
                          {"negated", b.negated},
                          {"value", dump_ast(*b.value)},
                          {"low", dump_ast(*b.low)},
                          {"high", dump_ast(*b.high)}};
    }
    ordered_json operator()(const InExpr& in) const {
      ordered_json j{{"node", "in"}, {"negated", in.negated}, {"value", dump_ast(*in.value)}};
      if (in.subquery) {
        j["subquery"] = dump_ast(*in.subquery);
      } else {
        auto list = ordered_json::array();
        for (const auto& e : in.list) list.push_back(dump_ast(*e));
        j["list"] = list;
      }
      return j;
    }
    ordered_json operator()(const LikeExpr& like) const {
      return ordered_json{{"node", "like"},
                          {"negated", like.negated},
                          {"value", dump_ast(*like.value)},
                          {"pattern", dump_ast(*like.pattern)}};
    }
    ordered_json operator()(const IsNullExpr& isnull) const {
      return ordered_json{{"node", "is_null"},
                          {"negated", isnull.negated},
                          {"value", dump_ast(*isnull.value)}};
    }
    ordered_json operator()(const SubqueryExpr& sub) const {
      return ordered_json{{"node", "subquery"}, {"query", dump_ast(*sub.query)}};
    }
  };
  return std::visit(Visitor{}, expr.node);
}

ordered_json dump_ast(const Query& query) {
  ordered_json j;
  if (query.set_op) {
    j["node"] = "set_op";
    j["op"] = set_op_name(*query.set_op);
    j["left"] = dump_ast(*query.left);
    j["right"] = dump_ast(*query.right);
  } else {
    const SelectCore& core = query.core;
    j["node"] = "select";
    j["distinct"] = core.distinct;
    auto items = ordered_json::array();
    for (const auto& item : core.items) {
      ordered_json ij{{"expr", dump_ast(*item.expr)}};
      if (!item.alias.empty()) ij["alias"] = item.alias;
      items.push_back(std::move(ij));
    }
    j["items"] = items;
    if (core.from) {
      j["from"] = dump_table_ref(*core.from);
      auto joins = ordered_json::array();
      for (const auto& join : core.joins) {
        ordered_json jj{{"target", dump_table_ref(join.target)}};
        if (join.on) jj["on"] = dump_ast(*join.on);
        joins.push_back(std::move(jj));
      }
      j["joins"] = joins;
    }
    if (core.where) j["where"] = dump_ast(*core.where);
    if (!core.group_by.empty()) {
      auto group = ordered_json::array();
      for (const auto& e : core.group_by) group.push_back(dump_ast(*e));
      j["group_by"] = group;
    }
    if (core.having) j["having"] = dump_ast(*core.having);
  }
  if (!query.order_by.empty()) {
    auto order = ordered_json::array();
    for (const auto& item : query.order_by) {
      order.push_back(
          ordered_json{{"expr", dump_ast(*item.expr)}, {"desc", item.desc}});
    }
    j["order_by"] = order;
  }
  if (query.limit) j["limit"] = *query.limit;
  return j;
}

bool ast_equal(const Query& a, const Query& b) { return dump_ast(a) == dump_ast(b); }

}  // namespace skforge::sql
