#include "gramconv/bgf_json.hpp"

#include <stdexcept>

namespace gramconv {

using nlohmann::json;

json expr_to_json(const Expr &e) {
  json j = {{"kind", kind_name(e.kind())}};
  auto list = [](const std::vector<Expr> &xs) {
    json a = json::array();
    for (const auto &x : xs) a.push_back(expr_to_json(x));
    return a;
  };
  switch (e.kind()) {
    case Kind::Epsilon:
    case Kind::Empty:
      break;
    case Kind::Terminal: j["text"] = e.text(); break;
    case Kind::Nonterminal: j["name"] = e.text(); break;
    case Kind::Sequence: j["parts"] = list(e.children()); break;
    case Kind::Choice: j["alts"] = list(e.children()); break;
    case Kind::Star:
    case Kind::Plus:
    case Kind::Optional: j["inner"] = expr_to_json(e.inner()); break;
    case Kind::Selector:
      j["name"] = e.text();
      j["inner"] = expr_to_json(e.inner());
      break;
    case Kind::SeparatedPlus:
      j["item"] = expr_to_json(e.children()[0]);
      j["separator"] = expr_to_json(e.children()[1]);
      break;
  }
  return j;
}

json production_to_json(const Production &p) {
  return {{"label", p.label}, {"lhs", p.lhs}, {"rhs", expr_to_json(p.rhs)}};
}

json grammar_to_json(const Grammar &g) {
  json prods = json::array();
  for (const auto &p : g.productions) prods.push_back(production_to_json(p));
  return {{"roots", g.roots}, {"productions", prods}};
}

namespace {

const json &field(const json &j, const char *name) {
  if (!j.is_object() || !j.contains(name))
    throw std::invalid_argument(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::vector<Expr> list_from(const json &a) {
  if (!a.is_array()) throw std::invalid_argument("expected array");
  std::vector<Expr> out;
  for (const auto &x : a) out.push_back(expr_from_json(x));
  if (out.size() < 2) throw std::invalid_argument("sequence or choice needs two children");
  return out;
}

}  // namespace

Expr expr_from_json(const json &j) {
  std::string k = field(j, "kind").get<std::string>();
  if (k == "epsilon") return Expr::epsilon();
  if (k == "empty") return Expr::empty();
  if (k == "terminal") return Expr::terminal(field(j, "text").get<std::string>());
  if (k == "nonterminal") return Expr::nonterminal(field(j, "name").get<std::string>());
  if (k == "sequence") return Expr::sequence(list_from(field(j, "parts")));
  if (k == "choice") return Expr::choice(list_from(field(j, "alts")));
  if (k == "star") return Expr::star(expr_from_json(field(j, "inner")));
  if (k == "plus") return Expr::plus(expr_from_json(field(j, "inner")));
  if (k == "optional") return Expr::optional(expr_from_json(field(j, "inner")));
  if (k == "selector")
    return Expr::selector(field(j, "name").get<std::string>(), expr_from_json(field(j, "inner")));
  if (k == "separated_plus")
    return Expr::separated_plus(expr_from_json(field(j, "item")),
                                expr_from_json(field(j, "separator")));
  throw std::invalid_argument("unknown expression kind '" + k + "'");
}

Grammar grammar_from_json(const json &j) {
  Grammar g;
  for (const auto &r : field(j, "roots")) g.roots.push_back(r.get<std::string>());
  for (const auto &p : field(j, "productions")) {
    g.productions.push_back({field(p, "label").get<std::string>(),
                             field(p, "lhs").get<std::string>(), expr_from_json(field(p, "rhs"))});
  }
  validate(g);
  return g;
}

}  // namespace gramconv
