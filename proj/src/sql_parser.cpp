#include "skforge/sql_parser.hpp"

#include <utility>

#include "skforge/errors.hpp"
#include "sql_lexer.hpp"

namespace skforge::sql {

namespace {

ExprPtr make_expr(Expr e) { return std::make_unique<Expr>(std::move(e)); }

class Parser {
 public:
  explicit Parser(const std::string& text) : tokens_(tokenize(text)) {}

  Query parse() {
    Query query = parse_query();
    accept_symbol(";");
    if (!at(TokenType::eof)) {
      fail({"end of statement"});
    }
    return query;
  }

 private:
  // query := select_core (set_op select_core)* [ORDER BY ...] [LIMIT n]
  Query parse_query() {
    Query query;
    query.core = parse_select_core();

    while (true) {
      std::optional<SetOp> op;
      if (accept_keyword("UNION")) {
        op = accept_keyword("ALL") ? SetOp::union_all : SetOp::union_distinct;
      } else if (accept_keyword("INTERSECT")) {
        if (peek_keyword("ALL")) unsupported("INTERSECT ALL");
        op = SetOp::intersect;
      } else if (accept_keyword("EXCEPT")) {
        if (peek_keyword("ALL")) unsupported("EXCEPT ALL");
        op = SetOp::except;
      } else {
        break;
      }
      auto left = std::make_unique<Query>(std::move(query));
      auto right = std::make_unique<Query>();
      right->core = parse_select_core();
      query = Query{};
      query.set_op = op;
      query.left = std::move(left);
      query.right = std::move(right);
    }

    if (accept_keyword("ORDER")) {
      expect_keyword("BY");
      do {
        OrderItem item;
        item.expr = parse_expr();
        if (accept_keyword("DESC")) {
          item.desc = true;
        } else {
          accept_keyword("ASC");
        }
        query.order_by.push_back(std::move(item));
      } while (accept_symbol(","));
    }

    if (accept_keyword("LIMIT")) {
      const Token& tok = expect(TokenType::number_lit, "number");
      query.limit = std::stoll(tok.text);
      if (accept_symbol(",")) unsupported("LIMIT with offset");
      if (peek_keyword("OFFSET")) unsupported("OFFSET");
    }
    return query;
  }

  SelectCore parse_select_core() {
    expect_keyword("SELECT");
    SelectCore core;
    core.distinct = accept_keyword("DISTINCT");

    do {
      core.items.push_back(parse_select_item());
    } while (accept_symbol(","));

    if (accept_keyword("FROM")) {
      core.from = parse_table_ref();
      while (true) {
        if (accept_symbol(",")) {
          // comma join == JOIN without ON
          core.joins.push_back({parse_table_ref(), nullptr});
          continue;
        }
        const bool inner = accept_keyword("INNER");
        if (accept_keyword("JOIN")) {
          JoinClause join;
          join.target = parse_table_ref();
          if (accept_keyword("ON")) join.on = parse_expr();
          core.joins.push_back(std::move(join));
          continue;
        }
        if (inner) fail({"JOIN"});
        break;
      }
    }

    if (accept_keyword("WHERE")) core.where = parse_expr();

    if (accept_keyword("GROUP")) {
      expect_keyword("BY");
      do {
        core.group_by.push_back(parse_expr());
      } while (accept_symbol(","));
    }

    if (accept_keyword("HAVING")) core.having = parse_expr();
    return core;
  }

  SelectItem parse_select_item() {
    SelectItem item;
    if (accept_symbol("*")) {
      item.expr = make_expr(Expr{StarExpr{}});
      return item;
    }
    // t.* needs two tokens of lookahead
    if (at(TokenType::identifier) && peek(1).type == TokenType::symbol &&
        peek(1).text == "." && peek(2).type == TokenType::symbol && peek(2).text == "*") {
      StarExpr star;
      star.qualifier = current().text;
      advance();
      advance();
      advance();
      item.expr = make_expr(Expr{std::move(star)});
      return item;
    }
    item.expr = parse_expr();
    if (accept_keyword("AS")) {
      item.alias = expect_identifier("alias");
    } else if (at(TokenType::identifier)) {
      item.alias = current().text;
      advance();
    }
    return item;
  }

  TableRef parse_table_ref() {
    TableRef ref;
    if (accept_symbol("(")) {
      if (!peek_keyword("SELECT")) fail({"SELECT"});
      ref.subquery = std::make_unique<Query>(parse_query());
      expect_symbol(")");
    } else {
      ref.table = expect_identifier("table name");
    }
    if (accept_keyword("AS")) {
      ref.alias = expect_identifier("alias");
    } else if (at(TokenType::identifier)) {
      ref.alias = current().text;
      advance();
    }
    return ref;
  }

  // expr := or_expr
  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (accept_keyword("OR")) {
      BinaryExpr bin;
      bin.op = BinaryOp::logical_or;
      bin.lhs = std::move(lhs);
      bin.rhs = parse_and();
      lhs = make_expr(Expr{std::move(bin)});
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (accept_keyword("AND")) {
      BinaryExpr bin;
      bin.op = BinaryOp::logical_and;
      bin.lhs = std::move(lhs);
      bin.rhs = parse_not();
      lhs = make_expr(Expr{std::move(bin)});
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (accept_keyword("NOT")) {
      UnaryExpr u;
      u.op = UnaryOp::logical_not;
      u.operand = parse_not();
      return make_expr(Expr{std::move(u)});
    }
    return parse_predicate();
  }

  ExprPtr parse_predicate() {
    ExprPtr lhs = parse_additive();
    while (true) {
      if (auto op = accept_comparison()) {
        BinaryExpr bin;
        bin.op = *op;
        bin.lhs = std::move(lhs);
        bin.rhs = parse_additive();
        lhs = make_expr(Expr{std::move(bin)});
        continue;
      }
      const bool negated = peek_keyword("NOT") && (peek_keyword(1, "BETWEEN") ||
                                                   peek_keyword(1, "IN") ||
                                                   peek_keyword(1, "LIKE"));
      if (negated) advance();

      if (accept_keyword("BETWEEN")) {
        BetweenExpr between;
        between.negated = negated;
        between.value = std::move(lhs);
        between.low = parse_additive();
        expect_keyword("AND");
        between.high = parse_additive();
        lhs = make_expr(Expr{std::move(between)});
        continue;
      }
      if (accept_keyword("IN")) {
        InExpr in;
        in.negated = negated;
        in.value = std::move(lhs);
        expect_symbol("(");
        if (peek_keyword("SELECT")) {
          in.subquery = std::make_unique<Query>(parse_query());
        } else {
          do {
            in.list.push_back(parse_additive());
          } while (accept_symbol(","));
        }
        expect_symbol(")");
        lhs = make_expr(Expr{std::move(in)});
        continue;
      }
      if (accept_keyword("LIKE")) {
        LikeExpr like;
        like.negated = negated;
        like.value = std::move(lhs);
        like.pattern = parse_additive();
        lhs = make_expr(Expr{std::move(like)});
        continue;
      }
      if (accept_keyword("IS")) {
        IsNullExpr isnull;
        isnull.negated = accept_keyword("NOT");
        expect_keyword("NULL");
        isnull.value = std::move(lhs);
        lhs = make_expr(Expr{std::move(isnull)});
        continue;
      }
      if (negated) fail({"BETWEEN", "IN", "LIKE"});
      return lhs;
    }
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    while (true) {
      BinaryOp op;
      if (accept_symbol("+")) {
        op = BinaryOp::add;
      } else if (accept_symbol("-")) {
        op = BinaryOp::sub;
      } else {
        return lhs;
      }
      BinaryExpr bin;
      bin.op = op;
      bin.lhs = std::move(lhs);
      bin.rhs = parse_multiplicative();
      lhs = make_expr(Expr{std::move(bin)});
    }
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_unary();
    while (true) {
      BinaryOp op;
      if (accept_symbol("*")) {
        op = BinaryOp::mul;
      } else if (accept_symbol("/")) {
        op = BinaryOp::div;
      } else {
        return lhs;
      }
      BinaryExpr bin;
      bin.op = op;
      bin.lhs = std::move(lhs);
      bin.rhs = parse_unary();
      lhs = make_expr(Expr{std::move(bin)});
    }
  }

  ExprPtr parse_unary() {
    if (accept_symbol("-")) {
      UnaryExpr u;
      u.op = UnaryOp::negate;
      u.operand = parse_unary();
      return make_expr(Expr{std::move(u)});
    }
    accept_symbol("+");  // unary plus is a no-op
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Token& tok = current();

    if (tok.type == TokenType::number_lit) {
      advance();
      return make_expr(Expr{LiteralExpr{LiteralKind::number, tok.text}});
    }
    if (tok.type == TokenType::string_lit) {
      advance();
      return make_expr(Expr{LiteralExpr{LiteralKind::string, tok.text}});
    }
    if (accept_keyword("NULL")) {
      return make_expr(Expr{LiteralExpr{LiteralKind::null, "NULL"}});
    }

    if (auto agg = accept_agg_func()) {
      expect_symbol("(");
      AggExpr expr;
      expr.fn = *agg;
      expr.distinct = accept_keyword("DISTINCT");
      if (accept_symbol("*")) {
        expr.star = true;
      } else {
        expr.arg = parse_expr();
      }
      expect_symbol(")");
      return make_expr(Expr{std::move(expr)});
    }

    if (accept_symbol("(")) {
      if (peek_keyword("SELECT")) {
        SubqueryExpr sub;
        sub.query = std::make_unique<Query>(parse_query());
        expect_symbol(")");
        return make_expr(Expr{std::move(sub)});
      }
      ExprPtr inner = parse_expr();
      expect_symbol(")");
      return inner;  // grouping only; the printer restores needed parens
    }

    if (tok.type == TokenType::identifier) {
      // ident '(' would be a non-aggregate function call
      if (peek(1).type == TokenType::symbol && peek(1).text == "(") {
        unsupported("function " + tok.text);
      }
      ColumnRefExpr ref;
      if (peek(1).type == TokenType::symbol && peek(1).text == "." &&
          peek(2).type == TokenType::identifier) {
        ref.qualifier = tok.text;
        advance();
        advance();
        ref.column = current().text;
        ref.pos = current().pos;
        ref.len = current().len;
        advance();
      } else {
        ref.column = tok.text;
        ref.pos = tok.pos;
        ref.len = tok.len;
        advance();
      }
      return make_expr(Expr{std::move(ref)});
    }

    if (tok.type == TokenType::keyword && is_unsupported_keyword(tok.upper)) {
      unsupported(tok.upper);
    }
    fail({"expression"});
  }

  // --- token plumbing ------------------------------------------------------

  const Token& current() const { return tokens_[pos_]; }
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t idx = pos_ + ahead;
    return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
  }
  void advance() {
    if (pos_ + 1 < tokens_.size()) ++pos_;
  }
  bool at(TokenType type) const { return current().type == type; }

  bool peek_keyword(const char* word) const { return peek_keyword(0, word); }
  bool peek_keyword(std::size_t ahead, const char* word) const {
    const Token& tok = peek(ahead);
    return tok.type == TokenType::keyword && tok.upper == word;
  }

  bool accept_keyword(const char* word) {
    if (!peek_keyword(word)) return false;
    advance();
    return true;
  }

  void expect_keyword(const char* word) {
    if (!accept_keyword(word)) fail({word});
  }

  bool accept_symbol(const char* sym) {
    if (at(TokenType::symbol) && current().text == sym) {
      advance();
      return true;
    }
    return false;
  }

  void expect_symbol(const char* sym) {
    if (!accept_symbol(sym)) fail({std::string("'") + sym + "'"});
  }

  const Token& expect(TokenType type, const char* what) {
    if (!at(type)) fail({what});
    const Token& tok = current();
    advance();
    return tok;
  }

  std::string expect_identifier(const char* what) {
    if (at(TokenType::keyword) && is_unsupported_keyword(current().upper)) {
      unsupported(current().upper);
    }
    return expect(TokenType::identifier, what).text;
  }

  std::optional<BinaryOp> accept_comparison() {
    if (!at(TokenType::symbol)) return std::nullopt;
    const std::string& s = current().text;
    BinaryOp op;
    if (s == "=" || s == "==") {
      op = BinaryOp::eq;
    } else if (s == "!=" || s == "<>") {
      op = BinaryOp::ne;
    } else if (s == "<") {
      op = BinaryOp::lt;
    } else if (s == "<=") {
      op = BinaryOp::le;
    } else if (s == ">") {
      op = BinaryOp::gt;
    } else if (s == ">=") {
      op = BinaryOp::ge;
    } else {
      return std::nullopt;
    }
    advance();
    return op;
  }

  std::optional<AggFunc> accept_agg_func() {
    if (!at(TokenType::keyword)) return std::nullopt;
    const std::string& word = current().upper;
    AggFunc fn;
    if (word == "COUNT") {
      fn = AggFunc::count;
    } else if (word == "SUM") {
      fn = AggFunc::sum;
    } else if (word == "AVG") {
      fn = AggFunc::avg;
    } else if (word == "MIN") {
      fn = AggFunc::min;
    } else if (word == "MAX") {
      fn = AggFunc::max;
    } else {
      return std::nullopt;
    }
    advance();
    return fn;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& tok = current();
    // A parse failure sitting on a recognized-but-unsupported keyword is
    // an out-of-dialect construct, not a syntax error.
    if (tok.type == TokenType::keyword && is_unsupported_keyword(tok.upper)) {
      unsupported(tok.upper);
    }
    throw ParseError(tok.pos, tok.text, std::move(expected));
  }

  [[noreturn]] void unsupported(const std::string& feature) const {
    throw UnsupportedFeatureError(current().pos, feature);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Query parse_sql(const std::string& text) { return Parser(text).parse(); }

}  // namespace skforge::sql
