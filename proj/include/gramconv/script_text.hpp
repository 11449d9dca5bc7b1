#pragma once

#include <string>
#include <string_view>

#include "gramconv/xbgf.hpp"

namespace gramconv {

enum class StepStyle {
  Script,    // re-parseable: `unchain(p(expr, binary))`
  Notation,  // report form: `unchain(p('', expr, binary))`
};

/// Forward arguments only; inversion payloads are not written.
std::string format_step(const Step &s, StepStyle style = StepStyle::Script);
/// One step per line.
std::string format_script(const Script &sc, StepStyle style = StepStyle::Script);

/// Parse `opname(arg, ...)`. Positions and permutation orders are 1-based in
/// text. Throws ParseError.
Step parse_step(std::string_view text);
Script parse_script(std::string_view text);

}  // namespace gramconv
