#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "skforge/schema.hpp"

namespace skforge::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// Runs DDL/DML against a fixture database file (create if missing).
void exec_sql(const std::string& db_path, const std::vector<std::string>& statements);

// Hand-built mini databases mirroring the Spider databases the error
// cases come from. Each creates db_root/<db_id>/<db_id>.sqlite and
// returns the file path.
std::string make_dog_kennels(const std::string& db_root);
std::string make_flight_2(const std::string& db_root);
std::string make_pets_1(const std::string& db_root);
std::string make_concert_singer(const std::string& db_root);

// Synthetic Spider-style databases: varied table counts, mixed column
// types, nulls, foreign keys. Deterministic for a fixed seed.
std::vector<std::string> make_fleet(const std::string& db_root, std::size_t count,
                                    std::uint64_t seed);

// In-memory random RowSet for sampler property tests.
RowSet random_rowset(std::uint64_t seed, std::size_t max_rows = 120,
                     std::size_t max_cols = 8);

}  // namespace skforge::testing
