#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "intertwine/errors.hpp"

namespace intertwine::detail {

struct Token {
  enum class Kind { Ident, Number, Punct, Newline, End };
  Kind kind;
  std::string text;
  int line;
  int column;
};

/// Splits source into identifiers, unsigned integers and punctuation.
/// `comment` starts a line comment; newlines are kept when `keep_newlines`.
inline std::vector<Token> lex(const std::string& src, const std::string& comment, bool keep_newlines) {
  static const char* const kTwoChar[] = {"<=", ">=", "==", "!=", "&&", "||"};
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  const auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      if (keep_newlines) out.push_back({Token::Kind::Newline, "\n", line, col});
      advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.compare(i, comment.size(), comment) == 0) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int l = line;
    const int cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Token::Kind::Ident, src.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Kind::Number, src.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* two : kTwoChar) {
      if (src.compare(i, 2, two) == 0) {
        out.push_back({Token::Kind::Punct, two, l, cl});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string("=+-*/%()[]{},;:<>!").find(c) == std::string::npos) {
      throw SyntaxError(std::string("unexpected character '") + c + "'", l, cl);
    }
    out.push_back({Token::Kind::Punct, std::string(1, c), l, cl});
    advance(1);
  }
  out.push_back({Token::Kind::End, "", line, col});
  return out;
}

/// Cursor over a token list with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_punct(const std::string& p) const { return peek().kind == Token::Kind::Punct && peek().text == p; }
  bool at_ident(const std::string& w) const { return peek().kind == Token::Kind::Ident && peek().text == w; }
  bool accept(const std::string& p) {
    if (!at_punct(p)) return false;
    take();
    return true;
  }
  const Token& expect(const std::string& p) {
    if (!at_punct(p)) fail("expected '" + p + "'");
    return take();
  }
  std::string expect_ident() {
    if (peek().kind != Token::Kind::Ident) fail("expected identifier");
    return take().text;
  }
  std::int64_t expect_number() {
    if (peek().kind != Token::Kind::Number) fail("expected integer");
    const Token& t = take();
    try {
      return std::stoll(t.text);
    } catch (const std::out_of_range&) {
      throw SyntaxError("integer out of range", t.line, t.column);
    }
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    const std::string near = t.kind == Token::Kind::End ? "end of input"
                             : t.kind == Token::Kind::Newline ? "end of line"
                                                               : "'" + t.text + "'";
    throw SyntaxError(msg + " near " + near, t.line, t.column);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace intertwine::detail
