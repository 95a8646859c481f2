#pragma once

#include <string>
#include <vector>

namespace skforge::sql {

enum class TokenType { identifier, string_lit, number_lit, keyword, symbol, eof };

struct Token {
  TokenType type = TokenType::eof;
  std::string text;   // identifiers verbatim, strings unescaped, keywords uppercased
  std::string upper;  // uppercase of identifiers/keywords for matching
  std::size_t pos = 0;
  std::size_t len = 0;
};

// Keywords the parser understands vs. ones it recognizes only to reject
// with UnsupportedFeature.
bool is_supported_keyword(const std::string& upper);
bool is_unsupported_keyword(const std::string& upper);

std::vector<Token> tokenize(const std::string& text);

}  // namespace skforge::sql
