#include "skforge/value.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace skforge {

std::string render_double(double v) {
  std::array<char, 64> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) {
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return std::string(buf.data());
  }
  return std::string(buf.data(), end);
}

std::string render_cell(const Cell& cell) {
  struct Renderer {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return render_double(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(const Cell::Blob& v) const {
      static const char* hex = "0123456789abcdef";
      std::string out = "x'";
      for (std::uint8_t b : v.bytes) {
        out += hex[b >> 4];
        out += hex[b & 0xf];
      }
      out += '\'';
      return out;
    }
  };
  return std::visit(Renderer{}, cell.data);
}

bool is_missing(const Cell& cell) {
  if (cell.is_null()) return true;
  if (const auto* s = std::get_if<std::string>(&cell.data)) {
    for (char c : *s) {
      if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
  }
  return false;
}

bool parses_as_number(const std::string& text) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;  // from_chars rejects an explicit plus
  if (first == last) return false;
  double out;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

bool is_numeric(const Cell& cell) {
  if (cell.is_integer() || cell.is_real()) return true;
  if (const auto* s = std::get_if<std::string>(&cell.data)) {
    return parses_as_number(*s);
  }
  return false;
}

std::string truncate_utf8(const std::string& text, std::size_t max_chars) {
  std::size_t chars = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (chars == max_chars) break;
    const auto byte = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if ((byte & 0xe0) == 0xc0) {
      len = 2;
    } else if ((byte & 0xf0) == 0xe0) {
      len = 3;
    } else if ((byte & 0xf8) == 0xf0) {
      len = 4;
    }
    if (i + len > text.size()) len = 1;
    i += len;
    ++chars;
  }
  return text.substr(0, i);
}

}  // namespace skforge
