#include "gramconv/grammar.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace gramconv {

const char *kind_name(Kind k) {
  switch (k) {
    case Kind::Epsilon: return "epsilon";
    case Kind::Empty: return "empty";
    case Kind::Terminal: return "terminal";
    case Kind::Nonterminal: return "nonterminal";
    case Kind::Sequence: return "sequence";
    case Kind::Choice: return "choice";
    case Kind::Star: return "star";
    case Kind::Plus: return "plus";
    case Kind::Optional: return "optional";
    case Kind::Selector: return "selector";
    case Kind::SeparatedPlus: return "separated_plus";
  }
  return "?";
}

Expr::Expr(Kind k, std::string text, std::vector<Expr> kids)
    : kind_(k), text_(std::move(text)), kids_(std::move(kids)) {}

Expr Expr::epsilon() { return Expr(Kind::Epsilon, "", {}); }
Expr Expr::empty() { return Expr(Kind::Empty, "", {}); }
Expr Expr::terminal(std::string text) { return Expr(Kind::Terminal, std::move(text), {}); }
Expr Expr::nonterminal(std::string name) {
  return Expr(Kind::Nonterminal, std::move(name), {});
}
Expr Expr::sequence(std::vector<Expr> parts) { return Expr(Kind::Sequence, "", std::move(parts)); }
Expr Expr::choice(std::vector<Expr> alts) { return Expr(Kind::Choice, "", std::move(alts)); }
Expr Expr::star(Expr inner) { return Expr(Kind::Star, "", {std::move(inner)}); }
Expr Expr::plus(Expr inner) { return Expr(Kind::Plus, "", {std::move(inner)}); }
Expr Expr::optional(Expr inner) { return Expr(Kind::Optional, "", {std::move(inner)}); }
Expr Expr::selector(std::string name, Expr inner) {
  return Expr(Kind::Selector, std::move(name), {std::move(inner)});
}
Expr Expr::separated_plus(Expr item, Expr separator) {
  return Expr(Kind::SeparatedPlus, "", {std::move(item), std::move(separator)});
}

bool Expr::is_iteration() const {
  return kind_ == Kind::Star || kind_ == Kind::Plus || kind_ == Kind::Optional;
}

Expr Expr::with_children(std::vector<Expr> kids) const {
  return Expr(kind_, text_, std::move(kids));
}

bool operator==(const Expr &a, const Expr &b) {
  return a.kind_ == b.kind_ && a.text_ == b.text_ && a.kids_ == b.kids_;
}

std::strong_ordering operator<=>(const Expr &a, const Expr &b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (auto c = a.text_.compare(b.text_); c != 0) return c <=> 0;
  return std::lexicographical_compare_three_way(a.kids_.begin(), a.kids_.end(), b.kids_.begin(),
                                                b.kids_.end());
}

std::strong_ordering operator<=>(const Production &a, const Production &b) {
  if (auto c = a.lhs.compare(b.lhs); c != 0) return c <=> 0;
  if (auto c = a.label.compare(b.label); c != 0) return c <=> 0;
  return a.rhs <=> b.rhs;
}

std::vector<Production> Grammar::definitions(const std::string &nt) const {
  std::vector<Production> out;
  for (const auto &p : productions)
    if (p.lhs == nt) out.push_back(p);
  return out;
}

bool Grammar::defines(const std::string &nt) const {
  return std::any_of(productions.begin(), productions.end(),
                     [&](const Production &p) { return p.lhs == nt; });
}

void visit(const Expr &e, const std::function<void(const Expr &)> &fn) {
  fn(e);
  for (const auto &k : e.children()) visit(k, fn);
}

Expr rewrite(const Expr &e, const std::function<Expr(const Expr &)> &fn) {
  if (e.children().empty()) return fn(e);
  std::vector<Expr> kids;
  kids.reserve(e.children().size());
  for (const auto &k : e.children()) kids.push_back(rewrite(k, fn));
  return fn(e.with_children(std::move(kids)));
}

std::vector<std::string> referenced(const Expr &e) {
  std::vector<std::string> out;
  visit(e, [&](const Expr &x) {
    if (x.is(Kind::Nonterminal) && std::find(out.begin(), out.end(), x.text()) == out.end())
      out.push_back(x.text());
  });
  return out;
}

Usage usage(const Grammar &g) {
  Usage u;
  for (const auto &p : g.productions) {
    u.defined.insert(p.lhs);
    visit(p.rhs, [&](const Expr &x) {
      if (x.is(Kind::Nonterminal)) u.used.insert(x.text());
    });
  }
  std::set_difference(u.defined.begin(), u.defined.end(), u.used.begin(), u.used.end(),
                      std::inserter(u.top, u.top.end()));
  return u;
}

int use_count(const Grammar &g, const std::string &name) {
  int n = 0;
  for (const auto &p : g.productions)
    visit(p.rhs, [&](const Expr &x) { n += x.is_nonterminal(name) ? 1 : 0; });
  return n;
}

std::set<std::string> all_names(const Grammar &g) {
  Usage u = usage(g);
  std::set<std::string> out = u.defined;
  out.insert(u.used.begin(), u.used.end());
  out.insert(g.roots.begin(), g.roots.end());
  return out;
}

bool canonical_eq(const Grammar &a, const Grammar &b) {
  std::set<std::string> ra(a.roots.begin(), a.roots.end());
  std::set<std::string> rb(b.roots.begin(), b.roots.end());
  if (ra != rb) return false;
  if (a.productions.size() != b.productions.size()) return false;
  auto pa = a.productions;
  auto pb = b.productions;
  std::sort(pa.begin(), pa.end());
  std::sort(pb.begin(), pb.end());
  return pa == pb;
}

void validate(const Expr &e) {
  visit(e, [](const Expr &x) {
    switch (x.kind()) {
      case Kind::Sequence:
      case Kind::Choice:
        if (x.children().size() < 2)
          throw std::invalid_argument(std::string("unary ") + kind_name(x.kind()));
        break;
      case Kind::Terminal:
        if (x.text().empty()) throw std::invalid_argument("empty terminal");
        break;
      case Kind::Nonterminal:
        if (x.text().empty()) throw std::invalid_argument("empty nonterminal name");
        break;
      case Kind::Selector:
        if (x.text().empty()) throw std::invalid_argument("empty selector name");
        break;
      default:
        break;
    }
  });
}

void validate(const Grammar &g) {
  std::set<std::pair<std::string, std::string>> labels;
  for (const auto &p : g.productions) {
    if (p.lhs.empty()) throw std::invalid_argument("production without lhs");
    validate(p.rhs);
    if (!p.label.empty() && !labels.emplace(p.lhs, p.label).second)
      throw std::invalid_argument("duplicate label [" + p.label + "] for " + p.lhs);
  }
}

Expr rename_nonterminal(const Expr &e, const std::string &from, const std::string &to) {
  return rewrite(e, [&](const Expr &x) {
    return x.is_nonterminal(from) ? Expr::nonterminal(to) : x;
  });
}

Expr replace_subterm(const Expr &e, const Expr &pattern, const Expr &with, int *count) {
  if (e == pattern) {
    if (count) ++*count;
    return with;
  }
  if (e.children().empty()) return e;
  std::vector<Expr> kids;
  kids.reserve(e.children().size());
  for (const auto &k : e.children()) kids.push_back(replace_subterm(k, pattern, with, count));
  return e.with_children(std::move(kids));
}

int count_subterm(const Expr &e, const Expr &pattern) {
  int n = 0;
  visit(e, [&](const Expr &x) { n += x == pattern ? 1 : 0; });
  return n;
}

}  // namespace gramconv
