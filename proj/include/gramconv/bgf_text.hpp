#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "gramconv/grammar.hpp"

namespace gramconv {

/// Syntax error in BGF or script text. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string &msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parse a grammar in the BGF text format:
///
///     roots: program ;
///     [binary] expr : expr ops expr ;
///
/// Throws ParseError on malformed text and on structural violations such as
/// a duplicate `[label]` for the same lhs.
Grammar parse_bgf(std::string_view text);

/// Parse a single right-hand side, e.g. `name::ID ("," ID)*`.
Expr parse_rhs(std::string_view text);

/// Deterministic text rendering; `parse_bgf(serialize_bgf(g))` reproduces `g`.
std::string serialize_bgf(const Grammar &g);

/// Right-hand side in BGF syntax.
std::string format_rhs(const Expr &e);

/// One production line without the trailing newline, e.g. `[l] x : a b ;`.
std::string format_production(const Production &p);

/// Quote a terminal, escaping `"`, `\`, newline and tab.
std::string quote_terminal(std::string_view text);

}  // namespace gramconv
