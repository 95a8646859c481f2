#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace skforge {

// One stored datum. SQLite distinguishes integer and float storage; both
// count as "number" cells for sampling purposes.
struct Cell {
  struct Blob {
    std::vector<std::uint8_t> bytes;
    bool operator==(const Blob&) const = default;
  };

  std::variant<std::monostate, std::int64_t, double, std::string, Blob> data;

  bool is_null() const { return std::holds_alternative<std::monostate>(data); }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(data); }
  bool is_real() const { return std::holds_alternative<double>(data); }
  bool is_text() const { return std::holds_alternative<std::string>(data); }
  bool is_blob() const { return std::holds_alternative<Blob>(data); }

  static Cell null() { return {}; }
  static Cell integer(std::int64_t v) { return {v}; }
  static Cell real(double v) { return {v}; }
  static Cell text(std::string v) { return {std::move(v)}; }
  static Cell blob(std::vector<std::uint8_t> v) { return {Blob{std::move(v)}}; }

  bool operator==(const Cell&) const = default;
};

// Shortest decimal form that round-trips the double exactly.
std::string render_double(double v);

// The training-text rendering of a cell: numbers in shortest round-trip
// form, text verbatim, blobs as an x'..' hex literal, null as empty.
std::string render_cell(const Cell& cell);

// A cell counts as missing when it is NULL or an empty / whitespace-only
// string. Real dumps use both conventions interchangeably.
bool is_missing(const Cell& cell);

// Number cells, plus text that parses fully as a decimal number (Spider
// stores many numbers as text).
bool is_numeric(const Cell& cell);
bool parses_as_number(const std::string& text);

// Truncate to at most `max_chars` Unicode codepoints, never cutting inside
// a UTF-8 sequence. Invalid bytes are treated as one-codepoint units.
std::string truncate_utf8(const std::string& text, std::size_t max_chars);

}  // namespace skforge
