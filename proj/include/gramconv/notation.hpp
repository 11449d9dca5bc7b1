#pragma once

#include <string>

#include "gramconv/grammar.hpp"

namespace gramconv {

/// Term notation used in reports and diagnostics:
/// `p('', expr, seq([expr, ops, expr]))`, `+(ID)`, `sel('f', function)`.
std::string notation(const Expr &e);
std::string notation(const Production &p);

}  // namespace gramconv
