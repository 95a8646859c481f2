#include <doctest.h>

#include <cctype>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "skforge/column_refs.hpp"
#include "skforge/errors.hpp"
#include "skforge/rng.hpp"
#include "skforge/sql_parser.hpp"
#include "skforge/sql_printer.hpp"

using namespace skforge;
using namespace skforge::sql;

namespace {

std::vector<std::string> gold_corpus() {
  std::ifstream in(std::string(SKFORGE_SOURCE_DIR) + "/tests/fixtures/gold_queries.json");
  nlohmann::json doc;
  in >> doc;
  std::vector<std::string> out;
  for (const auto& entry : doc) out.push_back(entry.at("query").get<std::string>());
  return out;
}

// Uppercases everything outside single-quoted literals; literal content
// must stay untouched by case folding.
std::string shout_identifiers(const std::string& text) {
  std::string out = text;
  bool quoted = false;
  for (char& c : out) {
    if (c == '\'') {
      quoted = !quoted;
    } else if (!quoted) {
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("parses the pets ordering query into the expected shape") {
  const auto ast = parse_sql("SELECT pettype, weight FROM pets ORDER BY pet_age LIMIT 1");
  REQUIRE(ast.is_select());
  CHECK(ast.core.items.size() == 2);
  REQUIRE(ast.core.from.has_value());
  CHECK(ast.core.from->table == "pets");
  REQUIRE(ast.order_by.size() == 1);
  CHECK_FALSE(ast.order_by[0].desc);
  CHECK(ast.limit == 1);
}

TEST_CASE("empty input is a parse error at position zero") {
  try {
    parse_sql("");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position == 0);
    CHECK_FALSE(e.expected.empty());
  }
}

TEST_CASE("two-table join with aliases keeps both names and the condition") {
  const auto ast = parse_sql(
      "SELECT count(*) FROM FLIGHTS AS T1 JOIN AIRPORTS AS T2 "
      "ON T1.DestAirport = T2.AirportCode WHERE T2.City = \"Aberdeen\"");
  REQUIRE(ast.is_select());
  REQUIRE(ast.core.from.has_value());
  CHECK(ast.core.from->table == "FLIGHTS");
  CHECK(ast.core.from->alias == "T1");
  REQUIRE(ast.core.joins.size() == 1);
  CHECK(ast.core.joins[0].target.table == "AIRPORTS");
  CHECK(ast.core.joins[0].target.alias == "T2");
  CHECK(ast.core.joins[0].on != nullptr);
  CHECK(ast.core.where != nullptr);
}

TEST_CASE("out-of-dialect constructs raise UnsupportedFeature, not misparses") {
  CHECK_THROWS_AS(parse_sql("SELECT * FROM a LEFT JOIN b ON a.x = b.x"),
                  UnsupportedFeatureError);
  CHECK_THROWS_AS(parse_sql("SELECT CASE WHEN x THEN 1 END FROM t"),
                  UnsupportedFeatureError);
  CHECK_THROWS_AS(parse_sql("SELECT CAST(x AS INT) FROM t"), UnsupportedFeatureError);
  CHECK_THROWS_AS(parse_sql("SELECT substr(name, 1, 2) FROM t"), UnsupportedFeatureError);
  CHECK_THROWS_AS(parse_sql("SELECT * FROM t LIMIT 5 OFFSET 2"), UnsupportedFeatureError);
  CHECK_THROWS_AS(parse_sql("WITH x AS (SELECT 1) SELECT * FROM x"),
                  UnsupportedFeatureError);

  CHECK_THROWS_AS(parse_sql("SELECT FROM t"), ParseError);
  CHECK_THROWS_AS(parse_sql("SELECT a FROM t WHERE"), ParseError);
  CHECK_THROWS_AS(parse_sql("SELECT a FROM t trailing garbage ,"), ParseError);
}

TEST_CASE("dialect coverage parses and round-trips") {
  const char* queries[] = {
      "SELECT * FROM singer",
      "SELECT DISTINCT country FROM singer WHERE age > 20",
      "SELECT name, capacity FROM stadium WHERE average BETWEEN 1000 AND 2000",
      "SELECT name FROM singer WHERE country IN ('France', 'USA')",
      "SELECT name FROM singer WHERE song_name LIKE '%Hey%'",
      "SELECT name FROM singer WHERE song_release_year IS NULL",
      "SELECT name FROM singer WHERE NOT age > 30 AND country = 'France'",
      "SELECT count(*), max(capacity) FROM stadium GROUP BY location HAVING count(*) > 1",
      "SELECT T2.name, count(*) FROM concert AS T1 JOIN stadium AS T2 "
      "ON T1.stadium_id = T2.stadium_id GROUP BY T1.stadium_id",
      "SELECT name FROM stadium WHERE stadium_id NOT IN (SELECT stadium_id FROM concert)",
      "SELECT name, age FROM singer ORDER BY age DESC LIMIT 3",
      "SELECT avg(weight), pettype FROM pets GROUP BY pettype",
      "SELECT weight FROM pets WHERE weight > (SELECT avg(weight) FROM pets)",
      "SELECT name FROM singer UNION SELECT name FROM stadium",
      "SELECT name FROM singer INTERSECT SELECT name FROM stadium",
      "SELECT name FROM singer EXCEPT SELECT name FROM stadium",
      "SELECT capacity * 2 + 1 FROM stadium WHERE capacity / 2 - 1 < 5000",
      "SELECT count(DISTINCT country) FROM singer",
      "SELECT t.name FROM (SELECT name, age FROM singer WHERE age < 40) AS t "
      "WHERE t.age > 20",
      "SELECT name FROM singer WHERE age = (SELECT max(age) FROM singer)",
      "SELECT - age FROM singer WHERE age != 20 AND age <> 21 OR age <= 19",
  };
  for (const char* q : queries) {
    CAPTURE(q);
    const auto ast = parse_sql(q);
    const auto printed = print_sql(ast);
    CAPTURE(printed);
    const auto reparsed = parse_sql(printed);
    CHECK(ast_equal(ast, reparsed));
    CHECK(print_sql(reparsed) == printed);
  }
}

TEST_CASE("parenthesized structure survives printing") {
  const auto ast = parse_sql("SELECT (a + b) * c FROM t WHERE (x OR y) AND z");
  const auto printed = print_sql(ast);
  CHECK(ast_equal(ast, parse_sql(printed)));

  // right-heavy arithmetic needs parens to reparse identically
  const auto right = parse_sql("SELECT a - (b - c) FROM t");
  CHECK(ast_equal(right, parse_sql(print_sql(right))));
  CHECK_FALSE(ast_equal(right, parse_sql("SELECT a - b - c FROM t")));
}

TEST_CASE("extract_column_refs covers every clause once per occurrence") {
  DatabaseSchema schema;  // resolution is optional; empty schema keeps refs unresolved

  const auto ast = parse_sql(
      "SELECT date_of_arrival, date_of_departure FROM Dogs");
  const auto refs = extract_column_refs(ast, schema);
  REQUIRE(refs.size() == 2);
  CHECK(refs[0].column == "date_of_arrival");
  CHECK(refs[1].column == "date_of_departure");
  CHECK_FALSE(refs[0].resolved());

  CHECK(extract_column_refs(parse_sql("SELECT count(*) FROM flights"), schema).empty());
  CHECK(extract_column_refs(parse_sql("SELECT * FROM flights"), schema).empty());

  // duplicates count per occurrence
  const auto twice =
      extract_column_refs(parse_sql("SELECT age FROM singer WHERE age > 5"), schema);
  CHECK(twice.size() == 2);
}

TEST_CASE("column refs across a nested query match a hand enumeration") {
  DatabaseSchema schema;
  const auto ast = parse_sql(
      "SELECT T1.name, count(T1.age) FROM singer AS T1 "
      "JOIN concert AS T2 ON T1.singer_id = T2.singer_id "
      "WHERE T2.year IN (SELECT year FROM concert WHERE theme LIKE '%a%') "
      "GROUP BY T1.name HAVING count(T1.age) > 1 ORDER BY T1.name DESC");
  std::vector<std::string> got;
  for (const auto& ref : extract_column_refs(ast, schema)) got.push_back(ref.column);
  // traversal order: FROM/ON first, then select items, where (incl.
  // subquery), group by, having, order by
  const std::vector<std::string> expected = {"singer_id", "singer_id", "name", "age",
                                             "year",      "year",      "theme", "name",
                                             "age",       "name"};
  CHECK(got == expected);
}

TEST_CASE("alias-qualified refs resolve to real tables when a schema is given") {
  DatabaseSchema schema;
  schema.db_id = "flight_2";
  TableSchema flights;
  flights.name = "flights";
  flights.columns = {{"DestAirport", classify_type("TEXT"), true}};
  TableSchema airports;
  airports.name = "airports";
  airports.columns = {{"AirportCode", classify_type("TEXT"), true},
                      {"City", classify_type("TEXT"), true}};
  schema.tables = {flights, airports};

  const auto ast = parse_sql(
      "SELECT count(*) FROM FLIGHTS AS T1 JOIN AIRPORTS AS T2 "
      "ON T1.DestAirport = T2.AirportCode WHERE T2.City = 'Aberdeen'");
  const auto refs = extract_column_refs(ast, schema);
  REQUIRE(refs.size() == 3);
  CHECK(refs[0].table == "flights");
  CHECK(refs[1].table == "airports");
  CHECK(refs[2].table == "airports");

  // unqualified refs resolve when exactly one table in scope has the column
  const auto plain = extract_column_refs(
      parse_sql("SELECT City FROM flights JOIN airports"), schema);
  REQUIRE(plain.size() == 1);
  CHECK(plain[0].table == "airports");
}

TEST_CASE("inserting a fresh column into any clause adds exactly one ref") {
  DatabaseSchema schema;
  const std::string variants[] = {
      "SELECT fresh_col, a FROM t WHERE b = 1",
      "SELECT a FROM t WHERE fresh_col = 1 AND b = 1",
      "SELECT a FROM t JOIN u ON fresh_col = b",
      "SELECT a FROM t WHERE b = 1 GROUP BY fresh_col",
      "SELECT a FROM t WHERE b = 1 GROUP BY a HAVING max(fresh_col) > 1",
      "SELECT a FROM t WHERE b = 1 ORDER BY fresh_col",
      "SELECT a FROM t WHERE b IN (SELECT fresh_col FROM u)",
      "SELECT a, max(fresh_col) FROM t WHERE b = 1",
  };
  const auto baseline =
      extract_column_refs(parse_sql("SELECT a FROM t WHERE b = 1"), schema).size();
  for (const auto& text : variants) {
    CAPTURE(text);
    const auto refs = extract_column_refs(parse_sql(text), schema);
    std::size_t fresh = 0;
    for (const auto& ref : refs) {
      if (ref.column == "fresh_col") ++fresh;
    }
    CHECK(fresh == 1);
    CHECK(refs.size() >= baseline);
  }
}

TEST_CASE("canonicalization folds case and normalizes quotes") {
  const auto a = parse_sql("select A from b");
  const auto b = parse_sql("SELECT a FROM B");
  CHECK(canonical_sql(a, CanonMode::strict) == canonical_sql(b, CanonMode::strict));
  CHECK(canonical_sql(a, CanonMode::component) == canonical_sql(b, CanonMode::component));

  // literal casing is preserved; quoting style is not
  const auto single = parse_sql("SELECT a FROM b WHERE c = 'JetBlue Airways'");
  const auto dbl = parse_sql("SELECT a FROM b WHERE c = \"JetBlue Airways\"");
  const auto lower = parse_sql("SELECT a FROM b WHERE c = 'jetblue airways'");
  CHECK(canonical_sql(single, CanonMode::strict) == canonical_sql(dbl, CanonMode::strict));
  CHECK(canonical_sql(single, CanonMode::strict) != canonical_sql(lower, CanonMode::strict));
}

TEST_CASE("component mode treats AND chains and select order as sets") {
  const auto a = parse_sql("SELECT x, y FROM t WHERE x = 1 AND y = 2");
  const auto b = parse_sql("SELECT y, x FROM t WHERE y = 2 AND x = 1");
  CHECK(canonical_sql(a, CanonMode::component) == canonical_sql(b, CanonMode::component));
  CHECK(canonical_sql(a, CanonMode::strict) != canonical_sql(b, CanonMode::strict));

  const auto in_a = parse_sql("SELECT x FROM t WHERE x IN (3, 1, 2)");
  const auto in_b = parse_sql("SELECT x FROM t WHERE x IN (1, 2, 3)");
  CHECK(canonical_sql(in_a, CanonMode::component) ==
        canonical_sql(in_b, CanonMode::component));
}

TEST_CASE("component mode ignores join order and alias numbering") {
  const auto gold = parse_sql(
      "SELECT count(*) FROM FLIGHTS AS T1 JOIN AIRPORTS AS T2 "
      "ON T1.DestAirport = T2.AirportCode WHERE T2.City = \"Aberdeen\"");
  const auto pred = parse_sql(
      "SELECT count(*) FROM airports AS T1 JOIN flights AS T2 "
      "ON T1.AirportCode = T2.DestAirport WHERE T1.City = \"Aberdeen\"");
  CHECK(canonical_sql(gold, CanonMode::component) ==
        canonical_sql(pred, CanonMode::component));
  CHECK(canonical_sql(gold, CanonMode::strict) != canonical_sql(pred, CanonMode::strict));
}

TEST_CASE("strict mode renames aliases positionally") {
  const auto a = parse_sql("SELECT T1.x FROM t AS T1 JOIN u AS T2 ON T1.id = T2.id");
  const auto b = parse_sql("SELECT alpha.x FROM t AS alpha JOIN u AS beta ON alpha.id = beta.id");
  CHECK(canonical_sql(a, CanonMode::strict) == canonical_sql(b, CanonMode::strict));
}

TEST_CASE("parser never crashes on mangled input") {
  Rng rng(6060);
  const auto corpus = gold_corpus();
  const char junk[] = "()'\",.*=<>!; SELECT FROM WHERE abc 123 \xc3\xa9 \xff";

  auto try_parse = [](const std::string& text) {
    try {
      (void)parse_sql(text);
    } catch (const ParseError&) {
    } catch (const UnsupportedFeatureError&) {
    }
    // anything else escapes and fails the test
  };

  for (int i = 0; i < 300; ++i) {
    // mutate a real query: delete, duplicate or overwrite a byte span
    std::string text = corpus[rng.index(corpus.size())];
    const std::size_t at = rng.index(text.size());
    switch (rng.index(3)) {
      case 0: text.erase(at, 1 + rng.index(4)); break;
      case 1: text.insert(at, text.substr(at, 1 + rng.index(6))); break;
      default: text[at] = junk[rng.index(sizeof(junk) - 1)];
    }
    try_parse(text);
  }
  for (int i = 0; i < 200; ++i) {  // pure noise
    std::string text;
    const std::size_t len = rng.index(40);
    for (std::size_t j = 0; j < len; ++j) text += junk[rng.index(sizeof(junk) - 1)];
    try_parse(text);
  }
  CHECK(true);  // reaching here means no crash and no foreign exception
}

TEST_CASE("canonicalization is idempotent and case-insensitive over the gold corpus") {
  const auto corpus = gold_corpus();
  REQUIRE(corpus.size() >= 100);
  for (const auto mode : {CanonMode::strict, CanonMode::component}) {
    for (const auto& query : corpus) {
      CAPTURE(query);
      const auto once = canonical_sql(parse_sql(query), mode);
      CAPTURE(once);
      CHECK(canonical_sql(parse_sql(once), mode) == once);
      CHECK(canonical_sql(parse_sql(shout_identifiers(once)), mode) == once);
    }
  }
}

TEST_CASE("canonicalization is idempotent over the dialect corpus") {
  const char* queries[] = {
      "SELECT pettype, weight FROM pets ORDER BY pet_age LIMIT 1",
      "select A from b where Y = 2 AND x = 1",
      "SELECT count(*) FROM FLIGHTS AS T1 JOIN AIRPORTS AS T2 "
      "ON T1.DestAirport = T2.AirportCode WHERE T2.City = \"Aberdeen\"",
      "SELECT name FROM stadium WHERE stadium_id NOT IN (SELECT stadium_id FROM concert)",
      "SELECT t.name FROM (SELECT name, age FROM singer) AS t WHERE t.age > 20",
      "SELECT name FROM singer UNION SELECT name FROM stadium ORDER BY name LIMIT 2",
      "SELECT a AS x, b AS y FROM t WHERE a IN (2, 1) AND b LIKE '%q%'",
      "SELECT s.name FROM singer s JOIN singer_in_concert sc ON s.singer_id = sc.singer_id",
      "SELECT x FROM person AS a JOIN person AS b ON a.id = b.id WHERE a.x > b.x",
  };
  for (const auto mode : {CanonMode::strict, CanonMode::component}) {
    for (const char* q : queries) {
      CAPTURE(q);
      const auto once = canonical_sql(parse_sql(q), mode);
      CAPTURE(once);
      const auto twice = canonical_sql(parse_sql(once), mode);
      CHECK(once == twice);
    }
  }
}
