#include "skforge/column_refs.hpp"

namespace skforge::sql {

namespace {

struct ScopeEntry {
  std::string alias_lower;  // declared alias, may be empty
  std::string table;        // real table name as written; empty for subqueries
};

class Extractor {
 public:
  Extractor(const DatabaseSchema& schema, std::vector<ColumnRef>& out)
      : schema_(schema), out_(out) {}

  void walk_query(const Query& q) {
    if (q.set_op) {
      walk_query(*q.left);
      walk_query(*q.right);
    } else {
      walk_core(q.core, q);
      return;  // order_by of a plain select is handled inside its scope
    }
    for (const auto& item : q.order_by) walk_expr(*item.expr);
  }

 private:
  void walk_core(const SelectCore& core, const Query& q) {
    std::vector<ScopeEntry> scope;
    if (core.from) {
      collect_entry(*core.from, scope);
      for (const auto& join : core.joins) collect_entry(join.target, scope);
    }
    scopes_.push_back(std::move(scope));

    // FROM subqueries resolve in their own scope but see this one; their
    // refs are collected during the same walk.
    if (core.from && core.from->subquery) walk_query(*core.from->subquery);
    for (const auto& join : core.joins) {
      if (join.target.subquery) walk_query(*join.target.subquery);
      if (join.on) walk_expr(*join.on);
    }
    for (const auto& item : core.items) walk_expr(*item.expr);
    if (core.where) walk_expr(*core.where);
    for (const auto& e : core.group_by) walk_expr(*e);
    if (core.having) walk_expr(*core.having);
    for (const auto& item : q.order_by) walk_expr(*item.expr);

    scopes_.pop_back();
  }

  void collect_entry(const TableRef& ref, std::vector<ScopeEntry>& scope) {
    ScopeEntry entry;
    entry.alias_lower = ident_lower(ref.alias);
    if (!ref.subquery) entry.table = ref.table;
    scope.push_back(std::move(entry));
  }

  void walk_expr(const Expr& e) {
    struct Visitor {
      Extractor& x;
      void operator()(const ColumnRefExpr& ref) { x.emit(ref); }
      void operator()(const StarExpr&) {}
      void operator()(const LiteralExpr&) {}
      void operator()(const BinaryExpr& bin) {
        x.walk_expr(*bin.lhs);
        x.walk_expr(*bin.rhs);
      }
      void operator()(const UnaryExpr& u) { x.walk_expr(*u.operand); }
      void operator()(const AggExpr& agg) {
        if (agg.arg) x.walk_expr(*agg.arg);
      }
      void operator()(const BetweenExpr& b) {
        x.walk_expr(*b.value);
        x.walk_expr(*b.low);
        x.walk_expr(*b.high);
      }
      void operator()(const InExpr& in) {
        x.walk_expr(*in.value);
        for (const auto& e : in.list) x.walk_expr(*e);
        if (in.subquery) x.walk_query(*in.subquery);
      }
      void operator()(const LikeExpr& like) {
        x.walk_expr(*like.value);
        x.walk_expr(*like.pattern);
      }
      void operator()(const IsNullExpr& isnull) { x.walk_expr(*isnull.value); }
      void operator()(const SubqueryExpr& sub) { x.walk_query(*sub.query); }
    };
    std::visit(Visitor{*this}, e.node);
  }

  void emit(const ColumnRefExpr& ref) {
    ColumnRef out;
    out.column = ref.column;
    out.pos = ref.pos;
    out.len = ref.len;
    out.table = resolve(ref);
    out_.push_back(std::move(out));
  }

  std::string resolve(const ColumnRefExpr& ref) {
    if (!ref.qualifier.empty()) {
      const std::string key = ident_lower(ref.qualifier);
      for (auto scope = scopes_.rbegin(); scope != scopes_.rend(); ++scope) {
        for (const auto& entry : *scope) {
          if (!entry.alias_lower.empty() && entry.alias_lower == key) {
            return schema_table_name(entry.table);
          }
          if (!entry.table.empty() && ident_lower(entry.table) == key) {
            return schema_table_name(entry.table);
          }
        }
      }
      // Qualifier matches nothing in scope; it may still name a real table.
      if (const auto* table = schema_.find_table(ref.qualifier)) return table->name;
      return {};
    }

    // Unqualified: resolve against the innermost scope whose tables
    // contain the column; ambiguity stays unresolved.
    for (auto scope = scopes_.rbegin(); scope != scopes_.rend(); ++scope) {
      std::string match;
      std::size_t hits = 0;
      for (const auto& entry : *scope) {
        if (entry.table.empty()) continue;
        const auto* table = schema_.find_table(entry.table);
        if (table && table->find_column(ref.column)) {
          ++hits;
          match = table->name;
        }
      }
      if (hits == 1) return match;
      if (hits > 1) return {};
    }
    return {};
  }

  std::string schema_table_name(const std::string& written) {
    if (written.empty()) return {};
    if (const auto* table = schema_.find_table(written)) return table->name;
    return written;
  }

  const DatabaseSchema& schema_;
  std::vector<ColumnRef>& out_;
  std::vector<std::vector<ScopeEntry>> scopes_;
};

}  // namespace

std::vector<ColumnRef> extract_column_refs(const Query& query,
                                           const DatabaseSchema& schema) {
  std::vector<ColumnRef> refs;
  Extractor(schema, refs).walk_query(query);
  return refs;
}

}  // namespace skforge::sql
