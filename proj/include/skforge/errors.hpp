#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace skforge {

// Base class for all tool errors. The CLI maps subclasses onto its
// exit-code contract: input errors -> 2, data-format errors -> 3,
// anything else -> 4.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A path, table, column or database the caller named does not exist.
class InputError : public Error {
 public:
  using Error::Error;
};

// The bytes exist but do not have the shape we expect.
class DataFormatError : public Error {
 public:
  using Error::Error;
};

class FileNotFoundError : public InputError {
 public:
  explicit FileNotFoundError(const std::string& path)
      : InputError("file not found: " + path), path(path) {}
  std::string path;
};

class NotADatabaseError : public DataFormatError {
 public:
  explicit NotADatabaseError(const std::string& path)
      : DataFormatError("not a database file: " + path) {}
};

class SchemaReadError : public DataFormatError {
 public:
  SchemaReadError(const std::string& table, const std::string& detail)
      : DataFormatError("schema read failed for table '" + table + "': " + detail),
        table(table) {}
  std::string table;
};

// Spider tables.json problems; carries the db_id being parsed when known.
class FormatError : public DataFormatError {
 public:
  FormatError(const std::string& db_id, const std::string& detail)
      : DataFormatError(db_id.empty() ? detail : detail + " (db_id: " + db_id + ")"),
        db_id(db_id) {}
  std::string db_id;
};

class UnknownTableError : public InputError {
 public:
  explicit UnknownTableError(const std::string& table)
      : InputError("unknown table: " + table), table(table) {}
  std::string table;
};

class UnknownColumnError : public InputError {
 public:
  explicit UnknownColumnError(const std::string& column)
      : InputError("unknown column: " + column), column(column) {}
  std::string column;
};

class RowReadError : public DataFormatError {
 public:
  using DataFormatError::DataFormatError;
};

class MissingPlaceholderError : public InputError {
 public:
  explicit MissingPlaceholderError(const std::string& name)
      : InputError("missing placeholder: {" + name + "}"), name(name) {}
  std::string name;
};

class DatabaseUnavailableError : public InputError {
 public:
  explicit DatabaseUnavailableError(const std::string& db_id)
      : InputError("database unavailable: " + db_id), db_id(db_id) {}
  std::string db_id;
};

// SQL text the lexer/parser cannot make sense of. `position` is a 0-based
// character offset into the input; `expected` lists the token classes that
// would have been legal there.
class ParseError : public DataFormatError {
 public:
  ParseError(std::size_t position, const std::string& found,
             std::vector<std::string> expected)
      : DataFormatError(format(position, found, expected)),
        position(position),
        found(found),
        expected(std::move(expected)) {}

  std::size_t position;
  std::string found;
  std::vector<std::string> expected;

 private:
  static std::string format(std::size_t pos, const std::string& found,
                            const std::vector<std::string>& expected) {
    std::string msg = "parse error at position " + std::to_string(pos);
    if (!found.empty()) msg += " near '" + found + "'";
    if (!expected.empty()) {
      msg += "; expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) msg += ", ";
        msg += expected[i];
      }
    }
    return msg;
  }
};

// SQL that is recognizably valid but outside the supported dialect.
class UnsupportedFeatureError : public DataFormatError {
 public:
  UnsupportedFeatureError(std::size_t position, const std::string& feature)
      : DataFormatError("unsupported SQL feature at position " +
                        std::to_string(position) + ": " + feature),
        position(position),
        feature(feature) {}
  std::size_t position;
  std::string feature;
};

}  // namespace skforge
