#include "fixtures.hpp"

#include <sqlite3.h>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <stdexcept>

#include "skforge/rng.hpp"
#include "skforge/value.hpp"

namespace skforge::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  const auto base = fs::temp_directory_path();
  path_ = base / ("skforge_" + tag + "_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter.fetch_add(1)));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void exec_sql(const std::string& db_path, const std::vector<std::string>& statements) {
  sqlite3* db = nullptr;
  if (sqlite3_open(db_path.c_str(), &db) != SQLITE_OK) {
    throw std::runtime_error("fixture open failed: " + db_path);
  }
  for (const auto& sql : statements) {
    char* err = nullptr;
    if (sqlite3_exec(db, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "unknown";
      sqlite3_free(err);
      sqlite3_close(db);
      throw std::runtime_error("fixture SQL failed (" + msg + "): " + sql);
    }
  }
  sqlite3_close(db);
}

namespace {

std::string make_db_dir(const std::string& db_root, const std::string& db_id) {
  const fs::path dir = fs::path(db_root) / db_id;
  fs::create_directories(dir);
  return (dir / (db_id + ".sqlite")).string();
}

}  // namespace

std::string make_dog_kennels(const std::string& db_root) {
  const std::string path = make_db_dir(db_root, "dog_kennels");
  exec_sql(path, {
    "CREATE TABLE Breeds (breed_code TEXT PRIMARY KEY, breed_name TEXT)",
    "CREATE TABLE Owners (owner_id INTEGER PRIMARY KEY, first_name TEXT, last_name TEXT,"
    " state TEXT, email_address TEXT)",
    "CREATE TABLE Dogs (dog_id INTEGER PRIMARY KEY, name TEXT, age INTEGER,"
    " date_arrived DATETIME, date_departed DATETIME, breed_code TEXT, owner_id INTEGER,"
    " FOREIGN KEY (breed_code) REFERENCES Breeds (breed_code),"
    " FOREIGN KEY (owner_id) REFERENCES Owners (owner_id))",
    "INSERT INTO Breeds VALUES ('ESK','Eskimo'), ('HUS','Husky'), ('BUL','Bulldog')",
    "INSERT INTO Owners VALUES (1,'Ada','Kim','Texas','ada@example.org'),"
    " (2,'Noor','Lane','NY','noor@example.org'), (3,'Ivy','Cole','Ohio','ivy@example.org')",
    "INSERT INTO Dogs VALUES"
    " (1,'Kacey',5,'2017-09-08','2018-03-25','ESK',1),"
    " (2,'Hipolito',2,'2017-10-21','2018-01-07','BUL',2),"
    " (3,'Mavis',8,'2017-06-29','2018-03-11','HUS',3),"
    " (4,'Houston',3,'2017-12-08','2018-02-27','ESK',1)",
  });
  return path;
}

std::string make_flight_2(const std::string& db_root) {
  const std::string path = make_db_dir(db_root, "flight_2");
  exec_sql(path, {
    "CREATE TABLE airlines (uid INTEGER PRIMARY KEY, Airline TEXT, Abbreviation TEXT,"
    " Country TEXT)",
    "CREATE TABLE airports (City TEXT, AirportCode TEXT PRIMARY KEY, AirportName TEXT,"
    " Country TEXT, CountryAbbrev TEXT)",
    "CREATE TABLE flights (Airline INTEGER, FlightNo INTEGER, SourceAirport TEXT,"
    " DestAirport TEXT,"
    " PRIMARY KEY (Airline, FlightNo),"
    " FOREIGN KEY (SourceAirport) REFERENCES airports (AirportCode),"
    " FOREIGN KEY (DestAirport) REFERENCES airports (AirportCode))",
    "INSERT INTO airlines VALUES (1,'United Airlines','UAL','USA'),"
    " (2,'JetBlue Airways','JetBlue','USA'), (3,'Southwest Airlines','Southwest','USA')",
    "INSERT INTO airports VALUES"
    " ('Aberdeen','APG','Aberdeen Proving Grounds','United States','US'),"
    " ('Abilene','ABI','Abilene Regional Airport','United States','US'),"
    " ('New York','JFK','John F Kennedy Intl','United States','US')",
    "INSERT INTO flights VALUES (1,28,'JFK','APG'), (2,165,'ABI','APG'),"
    " (2,166,'APG','JFK'), (3,385,'JFK','ABI')",
  });
  return path;
}

std::string make_pets_1(const std::string& db_root) {
  const std::string path = make_db_dir(db_root, "pets_1");
  exec_sql(path, {
    "CREATE TABLE student (stuid INTEGER PRIMARY KEY, lname TEXT, fname TEXT, age INTEGER,"
    " sex TEXT, major INTEGER, advisor INTEGER, city_code TEXT)",
    "CREATE TABLE pets (petid INTEGER PRIMARY KEY, pettype TEXT, pet_age INTEGER,"
    " weight REAL)",
    "CREATE TABLE has_pet (stuid INTEGER, petid INTEGER,"
    " FOREIGN KEY (stuid) REFERENCES student (stuid),"
    " FOREIGN KEY (petid) REFERENCES pets (petid))",
    "INSERT INTO student VALUES (1001,'Smith','Linda',18,'F',600,1121,'BAL'),"
    " (1002,'Kim','Tracy',19,'F',600,7712,'HKG'),"
    " (1003,'Jones','Shiela',21,'F',600,7792,'WAS')",
    "INSERT INTO pets VALUES (2001,'cat',3,12.0), (2002,'dog',2,13.4), (2003,'dog',1,9.3)",
    "INSERT INTO has_pet VALUES (1001,2001), (1002,2002), (1002,2003)",
  });
  return path;
}

std::string make_concert_singer(const std::string& db_root) {
  const std::string path = make_db_dir(db_root, "concert_singer");
  exec_sql(path, {
    "CREATE TABLE stadium (stadium_id INTEGER PRIMARY KEY, location TEXT, name TEXT,"
    " capacity INTEGER, highest INTEGER, lowest INTEGER, average INTEGER)",
    "CREATE TABLE singer (singer_id INTEGER PRIMARY KEY, name TEXT, country TEXT,"
    " song_name TEXT, song_release_year TEXT, age INTEGER, is_male BOOLEAN)",
    "CREATE TABLE concert (concert_id INTEGER PRIMARY KEY, concert_name TEXT, theme TEXT,"
    " stadium_id INTEGER, year TEXT,"
    " FOREIGN KEY (stadium_id) REFERENCES stadium (stadium_id))",
    "CREATE TABLE singer_in_concert (concert_id INTEGER, singer_id INTEGER,"
    " PRIMARY KEY (concert_id, singer_id),"
    " FOREIGN KEY (concert_id) REFERENCES concert (concert_id),"
    " FOREIGN KEY (singer_id) REFERENCES singer (singer_id))",
    "INSERT INTO stadium VALUES (1,'Raith','Stark Park',10104,4812,1294,2106),"
    " (2,'Ayr','Somerset Park',11998,2363,1057,1477),"
    " (3,'Falkirk','Falkirk Stadium',8680,4824,1880,2811),"
    " (4,'Dumfries','Palmerston Park',8352,2195,852,1205)",
    "INSERT INTO singer VALUES (1,'Joe Sharp','Netherlands','You',NULL,52,1),"
    " (2,'Timbaland','United States','Dangerous','2008',32,1),"
    " (3,'Justin Brown','France','Hey Oh','2013',29,1),"
    " (4,'Rose White','France','Sun','2003',41,0),"
    " (5,'John Nizinik','France','Gentleman','2014',43,1),"
    " (6,'Tribal King','France','Love','2016',25,1)",
    "INSERT INTO concert VALUES (1,'Auditions','Free choice',1,'2014'),"
    " (2,'Super bootcamp','Free choice 2',2,'2014'),"
    " (3,'Home Visits','Bleeding Love',2,'2015'),"
    " (4,'Week 1','Wide Awake',3,'2014'),"
    " (5,'Week 1','Happy Tonight',4,'2015'),"
    " (6,'Week 2','Party All Night',3,'2015')",
    "INSERT INTO singer_in_concert VALUES (1,2),(1,3),(1,5),(2,3),(2,6),(3,5),(4,4),(5,6),(5,3),(6,2)",
  });
  return path;
}

namespace {

const char* kTextWords[] = {"alpha", "bravo", "Texas", "NY", "Ohio", "maple", "river",
                            "stone", "lily", "Aberdeen", "crimson", "delta", "echo",
                            "北京", "café", "orange", "雪", "fox", "winter", "sol"};

std::string sql_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
  return out;
}

}  // namespace

std::vector<std::string> make_fleet(const std::string& db_root, std::size_t count,
                                    std::uint64_t seed) {
  std::vector<std::string> paths;
  Rng rng(seed);

  for (std::size_t d = 0; d < count; ++d) {
    char name[32];
    std::snprintf(name, sizeof(name), "fleet_%03zu", d);
    const std::string db_id = name;
    const std::string path = make_db_dir(db_root, db_id);

    // Spider-shaped: mostly 3-7 tables, a few single-table databases
    const std::size_t n_tables = (d % 16 == 0) ? 1 : 3 + rng.index(5);
    std::vector<std::string> ddl;
    std::vector<std::vector<std::string>> table_cols(n_tables);
    std::vector<std::vector<int>> col_types(n_tables);  // 0 int, 1 real, 2 text, 3 datetime

    std::vector<std::string> table_names;
    for (std::size_t t = 0; t < n_tables; ++t) {
      table_names.push_back("t" + std::to_string(t) + "_" + kTextWords[rng.index(12)]);
    }

    for (std::size_t t = 0; t < n_tables; ++t) {
      const std::size_t n_cols = 3 + rng.index(6);
      std::string sql = "CREATE TABLE " + table_names[t] + " (id INTEGER PRIMARY KEY";
      table_cols[t].push_back("id");
      col_types[t].push_back(0);
      for (std::size_t c = 1; c < n_cols; ++c) {
        const int type = static_cast<int>(rng.index(4));
        const char* decl = type == 0   ? "INTEGER"
                           : type == 1 ? "REAL"
                           : type == 2 ? "TEXT"
                                       : "DATETIME";
        const std::string col = "c" + std::to_string(c) + "_" + kTextWords[rng.index(20)];
        sql += ", " + col + " " + decl;
        table_cols[t].push_back(col);
        col_types[t].push_back(type);
      }
      if (t > 0 && rng.bernoulli(0.7)) {
        const std::size_t target = rng.index(t);
        sql += ", link_" + table_names[target] + " INTEGER REFERENCES " +
               table_names[target] + " (id)";
        table_cols[t].push_back("link_" + table_names[target]);
        col_types[t].push_back(0);
      }
      sql += ")";
      ddl.push_back(sql);
    }

    exec_sql(path, ddl);

    std::vector<std::string> inserts;
    for (std::size_t t = 0; t < n_tables; ++t) {
      const std::size_t n_rows = 12 + rng.index(100);
      for (std::size_t r = 0; r < n_rows; ++r) {
        std::string sql = "INSERT INTO " + table_names[t] + " VALUES (" + std::to_string(r);
        for (std::size_t c = 1; c < table_cols[t].size(); ++c) {
          sql += ", ";
          if (rng.bernoulli(0.12)) {
            sql += "NULL";
            continue;
          }
          if (table_cols[t][c].rfind("link_", 0) == 0) {
            sql += std::to_string(rng.index(12));
            continue;
          }
          switch (col_types[t][c]) {
            case 0: sql += std::to_string(rng.index(1000)); break;
            case 1: sql += render_double(static_cast<double>(rng.index(100000)) / 100.0); break;
            case 2: {
              std::string word = kTextWords[rng.index(20)];
              if (rng.bernoulli(0.25)) word += " " + std::string(kTextWords[rng.index(20)]);
              sql += sql_quote(word);
              break;
            }
            default:
              sql += sql_quote("20" + std::to_string(10 + rng.index(15)) + "-0" +
                               std::to_string(1 + rng.index(9)) + "-1" +
                               std::to_string(rng.index(9)));
          }
        }
        sql += ")";
        inserts.push_back(std::move(sql));
      }
    }
    inserts.insert(inserts.begin(), "BEGIN");
    inserts.push_back("COMMIT");
    exec_sql(path, inserts);
    paths.push_back(path);
  }
  return paths;
}

RowSet random_rowset(std::uint64_t seed, std::size_t max_rows, std::size_t max_cols) {
  Rng rng(seed);
  RowSet rows;
  rows.table = "rand";
  const std::size_t n_cols = 1 + rng.index(max_cols);
  const std::size_t n_rows = rng.index(max_rows + 1);
  std::vector<int> types;
  for (std::size_t c = 0; c < n_cols; ++c) {
    rows.column_order.push_back("col" + std::to_string(c));
    types.push_back(static_cast<int>(rng.index(3)));  // 0 int, 1 real, 2 text
  }
  for (std::size_t r = 0; r < n_rows; ++r) {
    std::vector<Cell> row;
    for (std::size_t c = 0; c < n_cols; ++c) {
      const double roll = rng.unit();
      if (roll < 0.15) {
        row.push_back(Cell::null());
      } else if (roll < 0.2) {
        row.push_back(Cell::text(""));  // empty string counts as missing
      } else {
        switch (types[c]) {
          case 0: row.push_back(Cell::integer(static_cast<std::int64_t>(rng.index(500)))); break;
          case 1: row.push_back(Cell::real(static_cast<double>(rng.index(10000)) / 7.0)); break;
          default: row.push_back(Cell::text(kTextWords[rng.index(20)]));
        }
      }
    }
    rows.rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace skforge::testing
