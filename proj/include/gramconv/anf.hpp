#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gramconv/grammar.hpp"
#include "gramconv/xbgf.hpp"

namespace gramconv {

struct AnfGrammar {
  Grammar grammar;
  Script trace;  // replaying it on the input yields `grammar`
};

class NormalizationError : public std::runtime_error {
 public:
  enum class Kind { Diverged, Unsupported };
  NormalizationError(Kind kind, const std::string &msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Top nonterminals in first-definition order. Candidates whose definitions
/// reference some defined nonterminal are preferred; with no top symbols the
/// existing roots are returned.
std::vector<std::string> detect_roots(const Grammar &g);

/// Rewrite to Abstract Normal Form with a replayable trace.
AnfGrammar normalize(const Grammar &g);

/// Labels empty; each rhs is N, an iteration of N, or a sequence of those;
/// a nonterminal with several productions is defined by chains only.
bool is_anf(const Grammar &g);
bool is_anf_rhs(const Expr &e);

}  // namespace gramconv
