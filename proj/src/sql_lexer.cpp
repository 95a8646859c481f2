#include "sql_lexer.hpp"

#include <cctype>
#include <unordered_set>

#include "skforge/errors.hpp"

namespace skforge::sql {

namespace {

const std::unordered_set<std::string>& supported_keywords() {
  static const std::unordered_set<std::string> kw = {
      "SELECT", "DISTINCT", "FROM", "AS", "JOIN", "INNER", "ON", "WHERE", "AND",
      "OR", "NOT", "BETWEEN", "IN", "LIKE", "IS", "NULL", "GROUP", "BY",
      "HAVING", "ORDER", "ASC", "DESC", "LIMIT", "UNION", "INTERSECT",
      "EXCEPT", "ALL", "COUNT", "SUM", "AVG", "MIN", "MAX",
  };
  return kw;
}

// Recognized so the parser can reject them by name instead of emitting a
// confusing generic parse error.
const std::unordered_set<std::string>& unsupported_keywords() {
  static const std::unordered_set<std::string> kw = {
      "LEFT", "RIGHT", "FULL", "OUTER", "CROSS", "NATURAL", "CASE", "WHEN",
      "THEN", "ELSE", "END", "CAST", "EXISTS", "OFFSET", "WITH", "OVER",
      "PARTITION", "WINDOW", "GLOB", "REGEXP", "COLLATE", "ESCAPE", "VALUES",
      "INSERT", "UPDATE", "DELETE", "CREATE", "DROP", "ALTER",
  };
  return kw;
}

std::string to_upper(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

bool is_supported_keyword(const std::string& upper) {
  return supported_keywords().count(upper) > 0;
}

bool is_unsupported_keyword(const std::string& upper) {
  return unsupported_keywords().count(upper) > 0;
}

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto push = [&](TokenType type, std::string value, std::size_t pos, std::size_t len) {
    Token tok;
    tok.type = type;
    tok.text = std::move(value);
    tok.pos = pos;
    tok.len = len;
    if (type == TokenType::identifier || type == TokenType::keyword) {
      tok.upper = to_upper(tok.text);
    }
    tokens.push_back(std::move(tok));
  };

  while (i < n) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }

    // 'string' and "string"; Spider gold quotes values either way, so a
    // double-quoted token is a string literal in this dialect, never an
    // identifier.
    if (c == '\'' || c == '"') {
      const std::size_t start = i;
      std::string content;
      ++i;
      bool closed = false;
      while (i < n) {
        if (text[i] == c) {
          if (i + 1 < n && text[i + 1] == c) {  // doubled quote escape
            content += c;
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        content += text[i++];
      }
      if (!closed) {
        throw ParseError(start, text.substr(start, 1), {"closing quote"});
      }
      push(TokenType::string_lit, std::move(content), start, i - start);
      continue;
    }

    if (c == '`') {  // quoted identifier
      const std::size_t start = i;
      std::string content;
      ++i;
      bool closed = false;
      while (i < n) {
        if (text[i] == '`') {
          ++i;
          closed = true;
          break;
        }
        content += text[i++];
      }
      if (!closed) {
        throw ParseError(start, "`", {"closing backtick"});
      }
      push(TokenType::identifier, std::move(content), start, i - start);
      continue;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      const std::size_t start = i;
      while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i < n && text[i] == '.') {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      }
      if (i < n && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (text[j] == '+' || text[j] == '-')) ++j;
        if (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) {
          i = j;
          while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        }
      }
      push(TokenType::number_lit, text.substr(start, i - start), start, i - start);
      continue;
    }

    if (ident_start(c)) {
      const std::size_t start = i;
      while (i < n && ident_char(text[i])) ++i;
      std::string word = text.substr(start, i - start);
      const std::string upper = to_upper(word);
      if (is_supported_keyword(upper) || is_unsupported_keyword(upper)) {
        push(TokenType::keyword, upper, start, i - start);
      } else {
        push(TokenType::identifier, std::move(word), start, i - start);
      }
      continue;
    }

    const std::size_t start = i;
    auto two = [&](const char* s) {
      return i + 1 < n && text[i] == s[0] && text[i + 1] == s[1];
    };
    if (two("<>") || two("!=") || two("<=") || two(">=") || two("==")) {
      push(TokenType::symbol, text.substr(i, 2), start, 2);
      i += 2;
      continue;
    }
    switch (c) {
      case '(': case ')': case ',': case '.': case '*': case '=':
      case '<': case '>': case '+': case '-': case '/': case ';':
        push(TokenType::symbol, std::string(1, c), start, 1);
        ++i;
        continue;
      default:
        throw ParseError(i, std::string(1, c), {"SQL token"});
    }
  }

  push(TokenType::eof, "", n, 0);
  return tokens;
}

}  // namespace skforge::sql
