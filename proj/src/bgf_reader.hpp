#pragma once

// Tokenizer and recursive-descent reader shared by the grammar and script parsers.

#include <string>
#include <string_view>
#include <vector>

#include "gramconv/bgf_text.hpp"
#include "gramconv/grammar.hpp"

namespace gramconv::detail {

enum class Tok {
  Ident,
  String,
  Number,
  LBracket,
  RBracket,
  Colon,
  ColonColon,
  Semi,
  Bar,
  Star,
  Plus,
  Question,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> tokenize(std::string_view src);

class Reader {
 public:
  explicit Reader(std::string_view src) : toks_(tokenize(src)) {}

  const Token &peek(size_t ahead = 0) const;
  bool at(Tok k) const { return peek().kind == k; }
  bool at_end() const { return at(Tok::End); }
  Token take();
  Token expect(Tok k, const char *what);
  bool accept(Tok k);
  [[noreturn]] void fail(const std::string &msg) const;

  /// choice := seq ('|' seq)*
  Expr expression();
  /// `[label] lhs : rhs ;`
  Production production();
  /// `p([label], lhs, rhs)` as written in scripts.
  Production production_term();
  std::string identifier(const char *what);

 private:
  Expr sequence();
  Expr postfix();
  Expr primary();
  bool starts_primary() const;

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace gramconv::detail
