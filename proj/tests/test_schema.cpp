#include <doctest.h>

#include <fstream>

#include "fixtures.hpp"
#include "skforge/database.hpp"
#include "skforge/errors.hpp"
#include "skforge/sampler.hpp"
#include "skforge/spider.hpp"

using namespace skforge;
namespace t = skforge::testing;

TEST_CASE("load_database reads the pets fixture schema") {
  t::TempDir tmp("schema");
  t::make_pets_1(tmp.path().string());
  const auto schema = load_database(tmp.file("pets_1/pets_1.sqlite"));

  CHECK(schema.db_id == "pets_1");
  const auto* pets = schema.find_table("pets");
  REQUIRE(pets != nullptr);
  CHECK(pets->find_column("pettype") != nullptr);
  CHECK(pets->find_column("weight")->declared_type.kind == DeclaredType::real);
  CHECK(pets->primary_key == std::vector<std::string>{"petid"});
}

TEST_CASE("load_database on an empty database yields zero tables") {
  t::TempDir tmp("schema");
  const std::string path = tmp.file("empty.sqlite");
  t::exec_sql(path, {"PRAGMA user_version = 0"});
  const auto schema = load_database(path);
  CHECK(schema.tables.empty());
}

TEST_CASE("foreign keys read back with all four identifiers") {
  t::TempDir tmp("schema");
  t::make_dog_kennels(tmp.path().string());
  const auto schema = load_database(tmp.file("dog_kennels/dog_kennels.sqlite"));

  const auto* dogs = schema.find_table("Dogs");
  REQUIRE(dogs != nullptr);
  // foreign_key_list reports FKs in reverse declaration order; compare as sets
  bool saw_owner = false, saw_breed = false;
  for (const auto& fk : dogs->foreign_keys) {
    if (fk.from_column == "owner_id") {
      CHECK(fk.from_table == "Dogs");
      CHECK(fk.to_table == "Owners");
      CHECK(fk.to_column == "owner_id");
      saw_owner = true;
    }
    if (fk.from_column == "breed_code") {
      CHECK(fk.to_table == "Breeds");
      saw_breed = true;
    }
  }
  CHECK(saw_owner);
  CHECK(saw_breed);
}

TEST_CASE("every foreign key endpoint resolves against the loaded schema") {
  t::TempDir tmp("schema");
  t::make_dog_kennels(tmp.path().string());
  t::make_flight_2(tmp.path().string());
  t::make_concert_singer(tmp.path().string());
  t::make_fleet(tmp.path().string(), 6, 99);

  for (const auto& entry : std::filesystem::recursive_directory_iterator(tmp.path())) {
    if (entry.path().extension() != ".sqlite") continue;
    const auto schema = load_database(entry.path().string());
    for (const auto& table : schema.tables) {
      for (const auto& fk : table.foreign_keys) {
        const auto* from = schema.find_table(fk.from_table);
        const auto* to = schema.find_table(fk.to_table);
        REQUIRE(from != nullptr);
        REQUIRE(to != nullptr);
        CHECK(from->find_column(fk.from_column) != nullptr);
        CHECK(to->find_column(fk.to_column) != nullptr);
      }
    }
  }
}

TEST_CASE("load_database errors") {
  CHECK_THROWS_AS(load_database("/nonexistent/nope.sqlite"), FileNotFoundError);

  t::TempDir tmp("schema");
  const std::string garbage = tmp.file("garbage.sqlite");
  std::ofstream(garbage) << "this is not a database, just bytes\n";
  CHECK_THROWS_AS(load_database(garbage), NotADatabaseError);

  // dangling foreign key target: SchemaReadError names the table
  const std::string dangling = tmp.file("dangling.sqlite");
  t::exec_sql(dangling,
              {"CREATE TABLE a (x INTEGER REFERENCES ghost (id), y TEXT)"});
  try {
    load_database(dangling);
    FAIL("expected SchemaReadError");
  } catch (const SchemaReadError& e) {
    CHECK(e.table == "a");
  }
}

TEST_CASE("fetch_rows requires a file-backed schema") {
  DatabaseSchema metadata_only;
  metadata_only.db_id = "meta";
  metadata_only.source = SchemaSource::spider_tables_json;
  TableSchema table;
  table.name = "t";
  table.columns.push_back({"x", classify_type("INTEGER"), true});
  metadata_only.tables.push_back(table);

  CHECK_THROWS_AS(fetch_rows(metadata_only, "t"), DatabaseUnavailableError);
}

TEST_CASE("declared type classification follows affinity-style rules") {
  CHECK(classify_type("INTEGER").kind == DeclaredType::integer);
  CHECK(classify_type("bigint").kind == DeclaredType::integer);
  CHECK(classify_type("VARCHAR(20)").kind == DeclaredType::text);
  CHECK(classify_type("Text").kind == DeclaredType::text);
  CHECK(classify_type("REAL").kind == DeclaredType::real);
  CHECK(classify_type("double precision").kind == DeclaredType::real);
  CHECK(classify_type("number").kind == DeclaredType::real);  // Spider vocabulary
  CHECK(classify_type("BOOLEAN").kind == DeclaredType::boolean);
  CHECK(classify_type("DATETIME").kind == DeclaredType::datetime);
  CHECK(classify_type("time").kind == DeclaredType::datetime);

  const auto exotic = classify_type("NUMERIC(10,2)");
  CHECK(exotic.kind == DeclaredType::other);
  CHECK(exotic.raw == "NUMERIC(10,2)");
  CHECK(classify_type("").kind == DeclaredType::other);
}

TEST_CASE("fetch_rows limit semantics and storage order") {
  t::TempDir tmp("rows");
  const std::string path = tmp.file("nums.sqlite");
  t::exec_sql(path, {
    "CREATE TABLE seq (n INTEGER, label TEXT)",
    "INSERT INTO seq VALUES (1,'a'),(2,'b'),(3,'c'),(4,'d'),(5,'e'),(6,'f'),(7,'g')",
    "CREATE TABLE void (x INTEGER)",
  });
  const auto schema = load_database(path);

  CHECK(fetch_rows(schema, "void").rows.empty());

  const auto first3 = fetch_rows(schema, "seq", 3);
  REQUIRE(first3.rows.size() == 3);
  CHECK(std::get<std::int64_t>(first3.rows[2][0].data) == 3);

  // prefix stability under increasing limits
  const auto full = fetch_rows(schema, "seq");
  REQUIRE(full.rows.size() == 7);
  for (std::size_t n : {1ul, 3ul, 5ul, 7ul, 9ul}) {
    const auto part = fetch_rows(schema, "seq", n);
    CHECK(part.rows.size() == std::min<std::size_t>(n, 7));
    for (std::size_t i = 0; i < part.rows.size(); ++i) {
      CHECK(part.rows[i] == full.rows[i]);
    }
  }

  CHECK_THROWS_AS(fetch_rows(schema, "missing"), UnknownTableError);
}

TEST_CASE("airlines fixture row holds the JetBlue Airways cell") {
  t::TempDir tmp("rows");
  t::make_flight_2(tmp.path().string());
  const auto schema = load_database(tmp.file("flight_2/flight_2.sqlite"));
  const auto rows = fetch_rows(schema, "airlines");

  const auto col = rows.column_index("Airline");
  REQUIRE(col.has_value());
  bool found = false;
  for (const auto& row : rows.rows) {
    if (row[*col] == Cell::text("JetBlue Airways")) found = true;
  }
  CHECK(found);
}

TEST_CASE("spider tables.json parses names, types and keys") {
  t::TempDir tmp("spider");
  const std::string path = tmp.file("tables.json");
  std::ofstream(path) << R"([
    {
      "db_id": "dog_kennels",
      "table_names_original": ["Dogs", "Owners"],
      "column_names_original": [[-1, "*"], [0, "dog_id"], [0, "date_arrived"],
                                 [0, "date_departed"], [0, "owner_id"],
                                 [1, "owner_id"], [1, "state"]],
      "column_types": ["text", "number", "time", "time", "number", "number", "text"],
      "primary_keys": [1, 5],
      "foreign_keys": [[4, 5]]
    },
    {
      "db_id": "tiny",
      "table_names_original": ["solo"],
      "column_names_original": [[-1, "*"], [0, "a"], [0, "b"]],
      "column_types": ["text", "text", "number"],
      "primary_keys": [],
      "foreign_keys": []
    }
  ])";

  const auto schemas = load_spider_tables(path);
  REQUIRE(schemas.size() == 2);

  const auto& kennels = schemas[0];
  CHECK(kennels.db_id == "dog_kennels");
  CHECK(kennels.source == SchemaSource::spider_tables_json);
  const auto* dogs = kennels.find_table("Dogs");
  REQUIRE(dogs != nullptr);
  CHECK(dogs->find_column("date_arrived") != nullptr);
  CHECK(dogs->find_column("date_departed") != nullptr);
  CHECK(dogs->find_column("date_arrived")->declared_type.kind == DeclaredType::datetime);
  REQUIRE(dogs->foreign_keys.size() == 1);
  CHECK(dogs->foreign_keys[0] ==
        ForeignKey{"Dogs", "owner_id", "Owners", "owner_id"});

  // ["text","number"] maps to [text, real]
  const auto* solo = schemas[1].find_table("solo");
  REQUIRE(solo != nullptr);
  CHECK(solo->columns[0].declared_type.kind == DeclaredType::text);
  CHECK(solo->columns[1].declared_type.kind == DeclaredType::real);
  CHECK(solo->foreign_keys.empty());
}

TEST_CASE("spider metadata types agree with live database type families") {
  t::TempDir tmp("spider");
  t::make_pets_1(tmp.path().string());
  t::make_dog_kennels(tmp.path().string());
  t::make_flight_2(tmp.path().string());

  for (const char* db_id : {"pets_1", "dog_kennels", "flight_2"}) {
    const auto live = load_database(
        tmp.file(std::string(db_id) + "/" + db_id + ".sqlite"));
    // serialize to metadata vocabulary and back; families must agree
    const auto round = parse_spider_tables(
        nlohmann::json::array({schema_to_spider_entry(live)}));
    REQUIRE(round.size() == 1);
    for (std::size_t t = 0; t < live.tables.size(); ++t) {
      for (std::size_t c = 0; c < live.tables[t].columns.size(); ++c) {
        const auto lhs = live.tables[t].columns[c].declared_type.kind;
        const auto rhs = round[0].tables[t].columns[c].declared_type.kind;
        const bool lhs_numeric = lhs == DeclaredType::integer || lhs == DeclaredType::real;
        const bool rhs_numeric = rhs == DeclaredType::integer || rhs == DeclaredType::real;
        CHECK(lhs_numeric == rhs_numeric);
        if (!lhs_numeric) CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("schema round-trips through the Spider metadata layout") {
  t::TempDir tmp("spider");
  t::make_dog_kennels(tmp.path().string());
  t::make_flight_2(tmp.path().string());
  t::make_concert_singer(tmp.path().string());
  t::make_fleet(tmp.path().string(), 5, 1234);

  for (const auto& entry : std::filesystem::recursive_directory_iterator(tmp.path())) {
    if (entry.path().extension() != ".sqlite") continue;
    const auto schema = load_database(entry.path().string());
    const auto doc = nlohmann::json::array({schema_to_spider_entry(schema)});
    const auto reloaded = parse_spider_tables(doc);
    REQUIRE(reloaded.size() == 1);
    CHECK(schema_equal(schema, reloaded[0]));
  }
}

TEST_CASE("blob cells come back tagged as blobs") {
  t::TempDir tmp("rows");
  const std::string path = tmp.file("blobs.sqlite");
  t::exec_sql(path, {
    "CREATE TABLE bin (id INTEGER, payload BLOB)",
    "INSERT INTO bin VALUES (1, x'DEADBEEF'), (2, NULL)",
  });
  const auto schema = load_database(path);
  const auto rows = fetch_rows(schema, "bin");
  REQUIRE(rows.rows.size() == 2);
  CHECK(rows.rows[0][1].is_blob());
  CHECK(rows.rows[1][1].is_null());

  // blobs are skipped by value sampling but do not count as missing
  SamplerConfig cfg;
  CHECK(sample_cell_values(rows, "payload", 5, cfg).values.empty());
}

TEST_CASE("composite primary keys arrive as nested index lists") {
  t::TempDir tmp("spider");
  const std::string path = tmp.file("tables.json");
  std::ofstream(path) << R"([{
    "db_id": "composite",
    "table_names_original": ["pairs"],
    "column_names_original": [[-1, "*"], [0, "a"], [0, "b"], [0, "c"]],
    "column_types": ["text", "number", "number", "text"],
    "primary_keys": [[1, 2]],
    "foreign_keys": []
  }])";
  const auto schemas = load_spider_tables(path);
  REQUIRE(schemas.size() == 1);
  const auto* pairs = schemas[0].find_table("pairs");
  REQUIRE(pairs != nullptr);
  CHECK(pairs->primary_key == std::vector<std::string>{"a", "b"});
}

TEST_CASE("malformed spider metadata raises FormatError") {
  t::TempDir tmp("spider");
  const std::string path = tmp.file("bad.json");
  std::ofstream(path) << "not json at all {{{";
  CHECK_THROWS_AS(load_spider_tables(path), FormatError);

  const std::string oob = tmp.file("oob.json");
  std::ofstream(oob) << R"([{ "db_id": "broken",
    "table_names_original": ["a"],
    "column_names_original": [[-1, "*"], [0, "x"]],
    "column_types": ["text", "text"],
    "primary_keys": [],
    "foreign_keys": [[1, 9]] }])";
  try {
    load_spider_tables(oob);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.db_id == "broken");
  }
}
