#include "skforge/sql_printer.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

namespace skforge::sql {

namespace {

// Higher binds tighter; used to restore only the parentheses the
// structure needs.
int precedence_of(BinaryOp op) {
  switch (op) {
    case BinaryOp::logical_or: return 1;
    case BinaryOp::logical_and: return 2;
    case BinaryOp::eq: case BinaryOp::ne: case BinaryOp::lt:
    case BinaryOp::le: case BinaryOp::gt: case BinaryOp::ge: return 4;
    case BinaryOp::add: case BinaryOp::sub: return 5;
    case BinaryOp::mul: case BinaryOp::div: return 6;
  }
  return 6;
}

constexpr int kPredicatePrec = 4;
constexpr int kUnaryPrec = 7;
constexpr int kPrimaryPrec = 8;

int expr_precedence(const Expr& expr) {
  struct Visitor {
    int operator()(const ColumnRefExpr&) const { return kPrimaryPrec; }
    int operator()(const StarExpr&) const { return kPrimaryPrec; }
    int operator()(const LiteralExpr&) const { return kPrimaryPrec; }
    int operator()(const BinaryExpr& e) const { return precedence_of(e.op); }
    int operator()(const UnaryExpr& e) const {
      return e.op == UnaryOp::logical_not ? 3 : kUnaryPrec;
    }
    int operator()(const AggExpr&) const { return kPrimaryPrec; }
    int operator()(const BetweenExpr&) const { return kPredicatePrec; }
    int operator()(const InExpr&) const { return kPredicatePrec; }
    int operator()(const LikeExpr&) const { return kPredicatePrec; }
    int operator()(const IsNullExpr&) const { return kPredicatePrec; }
    int operator()(const SubqueryExpr&) const { return kPrimaryPrec; }
  };
  return std::visit(Visitor{}, expr.node);
}

bool plain_identifier(const std::string& name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

std::string quote_string(const std::string& content) {
  std::string out = "'";
  for (char c : content) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
  return out;
}

std::string lower(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

class Printer {
 public:
  explicit Printer(std::optional<CanonMode> mode) : mode_(mode) {}

  std::string query(const Query& q) {
    std::string out;
    if (q.set_op) {
      out = query(*q.left);
      switch (*q.set_op) {
        case SetOp::union_distinct: out += " UNION "; break;
        case SetOp::union_all: out += " UNION ALL "; break;
        case SetOp::intersect: out += " INTERSECT "; break;
        case SetOp::except: out += " EXCEPT "; break;
      }
      out += query(*q.right);
    } else {
      out = core(q.core);
    }

    if (!q.order_by.empty()) {
      // Order semantics are positional; never sorted.
      out += " ORDER BY ";
      for (std::size_t i = 0; i < q.order_by.size(); ++i) {
        if (i) out += ", ";
        out += expr(*q.order_by[i].expr, 0);
        if (q.order_by[i].desc) out += " DESC";
      }
    }
    if (q.limit) out += " LIMIT " + std::to_string(*q.limit);
    return out;
  }

 private:
  struct ScopeEntry {
    std::string alias_key;  // declared alias, lowercased; may be empty
    std::string table_key;  // table name, lowercased; empty for subqueries
    std::string canon;      // what references to this item print as
  };
  using Scope = std::vector<ScopeEntry>;

  bool canonical() const { return mode_.has_value(); }
  bool component() const { return mode_ == CanonMode::component; }

  std::string core(const SelectCore& c) {
    std::vector<std::string> from_items;
    Scope scope;
    if (c.from) build_scope(c, scope, from_items);
    scopes_.push_back(std::move(scope));

    std::string out = "SELECT ";
    if (c.distinct) out += "DISTINCT ";

    std::vector<std::string> items;
    items.reserve(c.items.size());
    for (const auto& item : c.items) {
      std::string text = expr(*item.expr, 0);
      if (!item.alias.empty()) text += " AS " + identifier(item.alias);
      items.push_back(std::move(text));
    }
    if (component()) std::sort(items.begin(), items.end());
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ", ";
      out += items[i];
    }

    if (c.from) out += " FROM " + from_clause(c, from_items);
    if (c.where) out += " WHERE " + condition(*c.where);
    if (!c.group_by.empty()) {
      out += " GROUP BY ";
      for (std::size_t i = 0; i < c.group_by.size(); ++i) {
        if (i) out += ", ";
        out += expr(*c.group_by[i], 0);
      }
    }
    if (c.having) out += " HAVING " + condition(*c.having);

    scopes_.pop_back();
    return out;
  }

  // Resolves every from item to the name its column references print as,
  // and renders the item texts (before any component-mode sorting).
  void build_scope(const SelectCore& c, Scope& scope, std::vector<std::string>& item_texts) {
    struct Item {
      const TableRef* ref;
      std::string body;  // subquery canonical text, or empty for tables
    };
    std::vector<Item> items;
    items.push_back({&*c.from, {}});
    for (const auto& join : c.joins) items.push_back({&join.target, {}});

    // Subquery bodies print before this scope exists; their own FROM
    // resolves inside, enclosing scopes stay visible.
    for (auto& item : items) {
      if (item.ref->subquery) item.body = query(*item.ref->subquery);
    }

    std::vector<std::string> bodies;
    for (const auto& item : items) {
      if (!item.body.empty()) bodies.push_back(item.body);
    }
    std::sort(bodies.begin(), bodies.end());

    std::map<std::string, std::size_t> counts;  // occurrences per table name
    for (const auto& item : items) {
      if (item.ref->subquery) continue;
      ++counts[lower(item.ref->table)];
    }

    std::vector<std::size_t> sub_seen;  // per body rank, how many assigned
    sub_seen.resize(bodies.size(), 0);

    for (std::size_t i = 0; i < items.size(); ++i) {
      const TableRef& ref = *items[i].ref;
      ScopeEntry entry;
      entry.alias_key = lower(ref.alias);
      entry.table_key = ref.subquery ? "" : lower(ref.table);

      std::string canon;
      if (!canonical()) {
        canon = !ref.alias.empty() ? ref.alias : ref.table;
      } else if (component()) {
        if (ref.subquery) {
          const auto rank = static_cast<std::size_t>(
              std::lower_bound(bodies.begin(), bodies.end(), items[i].body) - bodies.begin());
          std::size_t offset = sub_seen[rank]++;
          canon = "sub" + std::to_string(rank + 1 + offset);
        } else if (counts[entry.table_key] == 1) {
          canon = entry.table_key;  // unique table: refs use the table name
        } else {
          canon = "t" + std::to_string(i + 1);  // self-join keeps position
        }
      } else {  // strict
        if (!ref.alias.empty() || ref.subquery) {
          canon = "t" + std::to_string(i + 1);
        } else {
          canon = entry.table_key;
        }
      }
      entry.canon = canon;

      std::string text;
      if (ref.subquery) {
        text = "(" + items[i].body + ") AS " + canon;
      } else {
        text = canonical() ? entry.table_key : identifier(ref.table);
        const bool needs_alias = canonical() ? canon != entry.table_key : !ref.alias.empty();
        if (needs_alias) text += " AS " + (canonical() ? canon : identifier(ref.alias));
      }
      item_texts.push_back(std::move(text));
      scope.push_back(std::move(entry));
    }
  }

  std::string from_clause(const SelectCore& c, std::vector<std::string>& item_texts) {
    if (!component()) {
      std::string out = item_texts[0];
      for (std::size_t j = 0; j < c.joins.size(); ++j) {
        out += " JOIN " + item_texts[j + 1];
        if (c.joins[j].on) out += " ON " + condition(*c.joins[j].on);
      }
      return out;
    }

    // Component mode: the FROM clause is a set. Tables sort by text and
    // every join condition lands, sorted, on the final JOIN.
    std::vector<std::string> conditions;
    for (const auto& join : c.joins) {
      if (!join.on) continue;
      collect_and_operands(*join.on, conditions);
    }
    std::sort(conditions.begin(), conditions.end());

    std::sort(item_texts.begin(), item_texts.end());
    std::string out = item_texts[0];
    for (std::size_t i = 1; i < item_texts.size(); ++i) {
      out += " JOIN " + item_texts[i];
      if (i + 1 == item_texts.size() && !conditions.empty()) {
        out += " ON " + join_all(conditions, " AND ");
      }
    }
    return out;
  }

  // A WHERE/HAVING/ON condition; component mode sorts maximal AND chains.
  std::string condition(const Expr& e) {
    if (component()) {
      std::vector<std::string> operands;
      collect_and_operands(e, operands);
      if (operands.size() > 1) {
        std::sort(operands.begin(), operands.end());
        return join_all(operands, " AND ");
      }
    }
    return expr(e, 0);
  }

  void collect_and_operands(const Expr& e, std::vector<std::string>& out) {
    if (const auto* bin = std::get_if<BinaryExpr>(&e.node);
        bin && bin->op == BinaryOp::logical_and) {
      collect_and_operands(*bin->lhs, out);
      collect_and_operands(*bin->rhs, out);
      return;
    }
    out.push_back(expr(e, precedence_of(BinaryOp::logical_and)));
  }

  static std::string join_all(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += sep;
      out += items[i];
    }
    return out;
  }

  std::string expr(const Expr& e, int parent_prec) {
    const int prec = expr_precedence(e);
    std::string text = expr_bare(e);
    if (prec < parent_prec) return "(" + text + ")";
    return text;
  }

  std::string expr_bare(const Expr& e) {
    struct Visitor {
      Printer& p;

      std::string operator()(const ColumnRefExpr& ref) {
        std::string column = p.canonical() ? lower(ref.column) : p.identifier(ref.column);
        if (ref.qualifier.empty()) return column;
        return p.qualifier_text(ref.qualifier) + "." + column;
      }

      std::string operator()(const StarExpr& star) {
        if (star.qualifier.empty()) return "*";
        return p.qualifier_text(star.qualifier) + ".*";
      }

      std::string operator()(const LiteralExpr& lit) {
        switch (lit.kind) {
          case LiteralKind::number: return lit.text;
          case LiteralKind::string: return quote_string(lit.text);
          case LiteralKind::null: return "NULL";
        }
        return lit.text;
      }

      std::string operator()(const BinaryExpr& bin) {
        const int prec = precedence_of(bin.op);
        if (bin.op == BinaryOp::logical_and && p.component()) {
          // maximal AND chains sort; this catches chains nested under
          // OR/NOT, clause roots go through condition()
          std::vector<std::string> operands;
          p.collect_and_operands(*bin.lhs, operands);
          p.collect_and_operands(*bin.rhs, operands);
          std::sort(operands.begin(), operands.end());
          return join_all(operands, " AND ");
        }
        std::string lhs = p.expr(*bin.lhs, prec);
        std::string rhs = p.expr(*bin.rhs, prec + 1);
        BinaryOp op = bin.op;
        if (p.component()) {
          const bool symmetric = op == BinaryOp::eq || op == BinaryOp::ne;
          const bool mirrored = op == BinaryOp::lt || op == BinaryOp::le ||
                                op == BinaryOp::gt || op == BinaryOp::ge;
          if ((symmetric || mirrored) && lhs > rhs) {
            std::swap(lhs, rhs);
            switch (op) {
              case BinaryOp::lt: op = BinaryOp::gt; break;
              case BinaryOp::le: op = BinaryOp::ge; break;
              case BinaryOp::gt: op = BinaryOp::lt; break;
              case BinaryOp::ge: op = BinaryOp::le; break;
              default: break;
            }
          }
        }
        return lhs + " " + binary_op_symbol(op) + " " + rhs;
      }

      std::string operator()(const UnaryExpr& u) {
        if (u.op == UnaryOp::logical_not) {
          return "NOT " + p.expr(*u.operand, 3 + 1);
        }
        return "-" + p.expr(*u.operand, kUnaryPrec);
      }

      std::string operator()(const AggExpr& agg) {
        std::string out = agg_func_name(agg.fn);
        out += "(";
        if (agg.distinct) out += "DISTINCT ";
        out += agg.star ? "*" : p.expr(*agg.arg, 0);
        out += ")";
        return out;
      }

      std::string operator()(const BetweenExpr& between) {
        std::string out = p.expr(*between.value, kPredicatePrec + 1);
        if (between.negated) out += " NOT";
        out += " BETWEEN " + p.expr(*between.low, kPredicatePrec + 1) + " AND " +
               p.expr(*between.high, kPredicatePrec + 1);
        return out;
      }

      std::string operator()(const InExpr& in) {
        std::string out = p.expr(*in.value, kPredicatePrec + 1);
        if (in.negated) out += " NOT";
        out += " IN (";
        if (in.subquery) {
          out += p.query(*in.subquery);
        } else {
          std::vector<std::string> elems;
          elems.reserve(in.list.size());
          for (const auto& e : in.list) elems.push_back(p.expr(*e, 0));
          if (p.component()) std::sort(elems.begin(), elems.end());
          out += join_all(elems, ", ");
        }
        out += ")";
        return out;
      }

      std::string operator()(const LikeExpr& like) {
        std::string out = p.expr(*like.value, kPredicatePrec + 1);
        if (like.negated) out += " NOT";
        out += " LIKE " + p.expr(*like.pattern, kPredicatePrec + 1);
        return out;
      }

      std::string operator()(const IsNullExpr& isnull) {
        return p.expr(*isnull.value, kPredicatePrec + 1) +
               (isnull.negated ? " IS NOT NULL" : " IS NULL");
      }

      std::string operator()(const SubqueryExpr& sub) {
        return "(" + p.query(*sub.query) + ")";
      }
    };
    return std::visit(Visitor{*this}, e.node);
  }

  std::string qualifier_text(const std::string& qualifier) {
    if (!canonical()) return identifier(qualifier);
    const std::string key = lower(qualifier);
    for (auto scope = scopes_.rbegin(); scope != scopes_.rend(); ++scope) {
      for (const auto& entry : *scope) {
        if ((!entry.alias_key.empty() && entry.alias_key == key) ||
            (!entry.table_key.empty() && entry.table_key == key)) {
          return entry.canon;
        }
      }
    }
    return key;  // unresolvable qualifiers just case-fold
  }

  std::string identifier(const std::string& name) const {
    if (canonical()) return lower(name);
    if (plain_identifier(name)) return name;
    return "`" + name + "`";
  }

  std::optional<CanonMode> mode_;
  std::vector<Scope> scopes_;
};

}  // namespace

std::string print_sql(const Query& query) { return Printer(std::nullopt).query(query); }

std::string canonical_sql(const Query& query, CanonMode mode) {
  return Printer(mode).query(query);
}

}  // namespace skforge::sql
