#include "gramconv/script_text.hpp"

#include <map>
#include <sstream>

#include "bgf_reader.hpp"
#include "gramconv/bgf_text.hpp"
#include "gramconv/notation.hpp"

namespace gramconv {

namespace {

class Writer {
 public:
  explicit Writer(StepStyle style) : style_(style) {}

  std::string expr(const Expr &e) const {
    return style_ == StepStyle::Script ? format_rhs(e) : notation(e);
  }

  std::string prod(const Production &p) const {
    if (style_ == StepStyle::Notation) return notation(p);
    std::string head = p.label.empty() ? "" : "[" + p.label + "], ";
    return "p(" + head + p.lhs + ", " + format_rhs(p.rhs) + ")";
  }

  std::string prods(const std::vector<Production> &ps) const {
    std::string out;
    for (size_t i = 0; i < ps.size(); ++i) out += (i ? ", " : "") + prod(ps[i]);
    return out;
  }

  std::string operator()(const step::RenameN &s) const { return s.from + ", " + s.to; }
  std::string operator()(const step::Reroot &s) const {
    std::string out;
    for (size_t i = 0; i < s.to.size(); ++i) out += (i ? ", " : "") + s.to[i];
    return out;
  }
  std::string operator()(const step::Unlabel &s) const { return prod(s.target); }
  std::string operator()(const step::Designate &s) const {
    return prod(s.target) + ", " + s.label + (s.selector ? ", selector" : "");
  }
  std::string operator()(const step::Anonymize &s) const { return prod(s.target); }
  std::string operator()(const step::Deanonymize &s) const {
    return prod(s.target) + ", " + prod(s.restored);
  }
  std::string operator()(const step::Abstractize &s) const { return prod(s.target); }
  std::string operator()(const step::Concretize &s) const {
    return prod(s.target) + ", " + prod(s.restored);
  }
  std::string operator()(const step::Massage &s) const {
    return prod(s.target) + ", " + prod(s.result);
  }
  std::string operator()(const step::Vertical &s) const { return s.nt; }
  std::string operator()(const step::Horizontal &s) const { return s.nt; }
  std::string operator()(const step::Undefine &s) const { return s.nt; }
  std::string operator()(const step::Define &s) const { return prods(s.productions); }
  std::string operator()(const step::Eliminate &s) const { return s.nt; }
  std::string operator()(const step::Introduce &s) const { return prods(s.productions); }
  std::string operator()(const step::Unchain &s) const { return prod(s.chain); }
  std::string operator()(const step::Chain &s) const { return prod(s.target); }
  std::string operator()(const step::Abridge &s) const { return prod(s.target); }
  std::string operator()(const step::Detour &s) const { return prod(s.target); }
  std::string operator()(const step::Extract &s) const {
    return prod(s.definition) + ", " + s.scope;
  }
  std::string operator()(const step::Inline &s) const { return s.nt; }
  std::string operator()(const step::Project &s) const {
    std::string out = prod(s.target);
    for (size_t k : s.positions) out += ", " + std::to_string(k + 1);
    return out;
  }
  std::string operator()(const step::Inject &s) const {
    std::string out = prod(s.target);
    for (const auto &[k, e] : s.insertions) out += ", " + std::to_string(k + 1) + ": " + expr(e);
    return out;
  }
  std::string operator()(const step::Narrow &s) const {
    return s.scope + ", " + expr(s.from) + ", " + expr(s.to);
  }
  std::string operator()(const step::Widen &s) const {
    return s.scope + ", " + expr(s.from) + ", " + expr(s.to);
  }
  std::string operator()(const step::Permute &s) const {
    std::string out = prod(s.target);
    for (size_t k : s.order) out += ", " + std::to_string(k + 1);
    return out;
  }
  std::string operator()(const step::Unite &s) const { return s.from + ", " + s.into; }
  std::string operator()(const step::SplitN &s) const { return s.from + ", " + s.into; }
  std::string operator()(const step::AssocIterate &s) const { return prod(s.target); }
  std::string operator()(const step::Iterate &s) const {
    return prod(s.target) + ", " + prod(s.restored);
  }

 private:
  StepStyle style_;
};

using detail::Reader;
using detail::Tok;
using detail::Token;

size_t position(Reader &r) {
  Token t = r.expect(Tok::Number, "position");
  size_t n = std::stoul(t.text);
  if (n == 0) throw ParseError("positions are 1-based", t.line, t.column);
  return n - 1;
}

std::vector<size_t> positions(Reader &r) {
  std::vector<size_t> out;
  while (r.accept(Tok::Comma)) out.push_back(position(r));
  return out;
}

std::vector<Production> production_list(Reader &r) {
  std::vector<Production> out{r.production_term()};
  while (r.accept(Tok::Comma)) out.push_back(r.production_term());
  return out;
}

std::string name(Reader &r) { return r.identifier("nonterminal"); }

void comma(Reader &r) { r.expect(Tok::Comma, "','"); }

Step read_step(Reader &r) {
  Token op = r.expect(Tok::Ident, "operator name");
  r.expect(Tok::LParen, "'('");
  const std::string &n = op.text;
  Step s;
  if (n == "renameN") {
    step::RenameN x;
    x.from = name(r);
    comma(r);
    x.to = name(r);
    s = x;
  } else if (n == "reroot") {
    step::Reroot x;
    if (r.at(Tok::Ident)) {
      x.to.push_back(name(r));
      while (r.accept(Tok::Comma)) x.to.push_back(name(r));
    }
    s = x;
  } else if (n == "unlabel") {
    s = step::Unlabel{r.production_term()};
  } else if (n == "designate") {
    step::Designate x;
    x.target = r.production_term();
    comma(r);
    x.label = r.identifier("label");
    if (r.accept(Tok::Comma)) {
      Token flag = r.expect(Tok::Ident, "'selector'");
      if (flag.text != "selector") throw ParseError("expected 'selector'", flag.line, flag.column);
      x.selector = true;
    }
    s = x;
  } else if (n == "anonymize") {
    s = step::Anonymize{r.production_term(), std::nullopt};
  } else if (n == "deanonymize" || n == "concretize" || n == "massage" || n == "iterate") {
    Production a = r.production_term();
    comma(r);
    Production b = r.production_term();
    if (n == "deanonymize") s = step::Deanonymize{a, b};
    if (n == "concretize") s = step::Concretize{a, b};
    if (n == "massage") s = step::Massage{a, b};
    if (n == "iterate") s = step::Iterate{a, b};
  } else if (n == "abstractize") {
    s = step::Abstractize{r.production_term(), std::nullopt};
  } else if (n == "vertical") {
    s = step::Vertical{name(r), std::nullopt};
  } else if (n == "horizontal") {
    s = step::Horizontal{name(r), std::nullopt};
  } else if (n == "undefine") {
    s = step::Undefine{name(r), std::nullopt};
  } else if (n == "define") {
    s = step::Define{production_list(r)};
  } else if (n == "eliminate") {
    s = step::Eliminate{name(r), std::nullopt};
  } else if (n == "introduce") {
    s = step::Introduce{production_list(r)};
  } else if (n == "unchain") {
    s = step::Unchain{r.production_term(), std::nullopt};
  } else if (n == "chain") {
    s = step::Chain{r.production_term(), std::nullopt, std::nullopt};
  } else if (n == "abridge") {
    s = step::Abridge{r.production_term()};
  } else if (n == "detour") {
    s = step::Detour{r.production_term()};
  } else if (n == "extract") {
    step::Extract x;
    x.definition = r.production_term();
    comma(r);
    x.scope = name(r);
    s = x;
  } else if (n == "inline") {
    s = step::Inline{name(r), std::nullopt, std::nullopt};
  } else if (n == "project") {
    step::Project x;
    x.target = r.production_term();
    x.positions = positions(r);
    s = x;
  } else if (n == "inject") {
    step::Inject x;
    x.target = r.production_term();
    while (r.accept(Tok::Comma)) {
      size_t k = position(r);
      r.expect(Tok::Colon, "':'");
      x.insertions.emplace_back(k, r.expression());
    }
    s = x;
  } else if (n == "narrow" || n == "widen") {
    std::string scope = name(r);
    comma(r);
    Expr from = r.expression();
    comma(r);
    Expr to = r.expression();
    if (n == "narrow") {
      s = step::Narrow{scope, from, to};
    } else {
      s = step::Widen{scope, from, to};
    }
  } else if (n == "permute") {
    step::Permute x;
    x.target = r.production_term();
    x.order = positions(r);
    s = x;
  } else if (n == "unite" || n == "splitN") {
    std::string from = name(r);
    comma(r);
    std::string into = name(r);
    if (n == "unite") {
      s = step::Unite{from, into, std::nullopt, std::nullopt};
    } else {
      s = step::SplitN{from, into, {}, {}};
    }
  } else if (n == "assoc") {
    s = step::AssocIterate{r.production_term(), std::nullopt};
  } else {
    throw ParseError("unknown operator '" + n + "'", op.line, op.column);
  }
  r.expect(Tok::RParen, "')'");
  return s;
}

}  // namespace

std::string format_step(const Step &s, StepStyle style) {
  return step_name(s) + "(" + std::visit(Writer(style), s) + ")";
}

std::string format_script(const Script &sc, StepStyle style) {
  std::ostringstream out;
  for (const auto &s : sc) out << format_step(s, style) << '\n';
  return out.str();
}

Step parse_step(std::string_view text) {
  Reader r(text);
  Step s = read_step(r);
  if (!r.at_end()) r.fail("trailing input after step");
  return s;
}

Script parse_script(std::string_view text) {
  Reader r(text);
  Script out;
  while (!r.at_end()) out.push_back(read_step(r));
  return out;
}

}  // namespace gramconv
