#include "gramconv/notation.hpp"

namespace gramconv {

namespace {

std::string quoted(const std::string &s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
    } else if (c == '\'') {
      out += "\\'";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string joined(const std::vector<Expr> &xs) {
  std::string s;
  for (size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + notation(xs[i]);
  return s;
}

}  // namespace

std::string notation(const Expr &e) {
  switch (e.kind()) {
    case Kind::Epsilon: return "ε";
    case Kind::Empty: return "φ";
    case Kind::Terminal: return quoted(e.text());
    case Kind::Nonterminal: return e.text();
    case Kind::Sequence: return "seq([" + joined(e.children()) + "])";
    case Kind::Choice: return "choice([" + joined(e.children()) + "])";
    case Kind::Star: return "*(" + notation(e.inner()) + ")";
    case Kind::Plus: return "+(" + notation(e.inner()) + ")";
    case Kind::Optional: return "?(" + notation(e.inner()) + ")";
    case Kind::Selector: return "sel(" + quoted(e.text()) + ", " + notation(e.inner()) + ")";
    case Kind::SeparatedPlus: return "s+(" + joined(e.children()) + ")";
  }
  return "?";
}

std::string notation(const Production &p) {
  return "p(" + quoted(p.label) + ", " + p.lhs + ", " + notation(p.rhs) + ")";
}

}  // namespace gramconv
