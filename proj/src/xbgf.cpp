#include "gramconv/xbgf.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gramconv/notation.hpp"

namespace gramconv {

const char *failure_name(XbgfFailure f) {
  switch (f) {
    case XbgfFailure::TargetNotFound: return "TargetNotFound";
    case XbgfFailure::AmbiguousTarget: return "AmbiguousTarget";
    case XbgfFailure::PreconditionViolated: return "PreconditionViolated";
    case XbgfFailure::NameClash: return "NameClash";
    case XbgfFailure::MissingPayload: return "MissingPayload";
  }
  return "?";
}

XbgfError::XbgfError(XbgfFailure kind, const std::string &detail)
    : std::runtime_error(std::string(failure_name(kind)) + ": " + detail), kind_(kind) {}

ScriptError::ScriptError(size_t index, Grammar intermediate, const XbgfError &cause)
    : std::runtime_error("step " + std::to_string(index + 1) + ": " + cause.what()),
      index_(index),
      intermediate_(std::move(intermediate)),
      kind_(cause.kind()) {}

namespace {

[[noreturn]] void fail(XbgfFailure k, const std::string &msg) { throw XbgfError(k, msg); }

size_t locate(const Grammar &g, const Production &t) {
  for (size_t i = 0; i < g.productions.size(); ++i)
    if (g.productions[i] == t) return i;
  fail(XbgfFailure::TargetNotFound, notation(t));
}

void require(bool cond, const std::string &msg) {
  if (!cond) fail(XbgfFailure::PreconditionViolated, msg);
}

bool label_taken(const Grammar &g, const std::string &lhs, const std::string &label,
                 size_t skip = SIZE_MAX) {
  if (label.empty()) return false;
  for (size_t i = 0; i < g.productions.size(); ++i)
    if (i != skip && g.productions[i].lhs == lhs && g.productions[i].label == label) return true;
  return false;
}

bool is_root(const Grammar &g, const std::string &nt) {
  return std::find(g.roots.begin(), g.roots.end(), nt) != g.roots.end();
}

bool mentions(const Expr &e, const std::string &nt) {
  bool found = false;
  visit(e, [&](const Expr &x) { found = found || x.is_nonterminal(nt); });
  return found;
}

int uses_outside(const Grammar &g, const std::string &nt) {
  int n = 0;
  for (const auto &p : g.productions)
    if (p.lhs != nt) visit(p.rhs, [&](const Expr &x) { n += x.is_nonterminal(nt) ? 1 : 0; });
  return n;
}

std::vector<Production> sorted(std::vector<Production> ps) {
  std::sort(ps.begin(), ps.end());
  return ps;
}

void erase_defs(Grammar &g, const std::string &nt) {
  std::erase_if(g.productions, [&](const Production &p) { return p.lhs == nt; });
}

Expr strip_selectors(const Expr &e) {
  return rewrite(e, [](const Expr &x) { return x.is(Kind::Selector) ? x.inner() : x; });
}

Expr absorb(const Expr &e) {
  switch (e.kind()) {
    case Kind::Sequence: {
      std::vector<Expr> kept;
      for (const auto &k : e.children()) {
        Expr a = absorb(k);
        if (!a.is(Kind::Epsilon)) kept.push_back(a);
      }
      if (kept.empty()) return Expr::epsilon();
      if (kept.size() == 1) return kept.front();
      return Expr::sequence(std::move(kept));
    }
    case Kind::Choice: {
      std::vector<Expr> rest;
      bool had_eps = false;
      for (const auto &k : e.children()) {
        Expr a = absorb(k);
        if (a.is(Kind::Epsilon)) {
          had_eps = true;
        } else {
          rest.push_back(a);
        }
      }
      if (rest.empty()) return Expr::epsilon();
      if (!had_eps) return Expr::choice(std::move(rest));
      require(rest.size() == 1, "choice mixes ε with several alternatives: " + notation(e));
      return Expr::optional(rest.front());
    }
    case Kind::Star:
    case Kind::Plus:
    case Kind::Optional: {
      Expr a = absorb(e.inner());
      return a.is(Kind::Epsilon) ? a : e.with_children({a});
    }
    case Kind::Selector: {
      Expr a = absorb(e.inner());
      return a.is(Kind::Epsilon) ? a : e.with_children({a});
    }
    case Kind::SeparatedPlus: {
      Expr item = absorb(e.children()[0]);
      Expr sep = absorb(e.children()[1]);
      if (item.is(Kind::Epsilon)) return sep.is(Kind::Epsilon) ? sep : Expr::star(sep);
      if (sep.is(Kind::Epsilon)) return Expr::plus(item);
      return e.with_children({item, sep});
    }
    default:
      return e;
  }
}

std::vector<Production> split_choices(const std::vector<Production> &ps) {
  std::vector<Production> out;
  for (const auto &p : ps) {
    if (p.rhs.is(Kind::Choice)) {
      for (const auto &alt : p.rhs.children()) out.push_back({"", p.lhs, alt});
    } else {
      out.push_back(p);
    }
  }
  return out;
}

Production with_rhs(const Production &p, Expr rhs) { return {p.label, p.lhs, std::move(rhs)}; }

Production project_result(const Production &t, const std::vector<size_t> &positions) {
  require(t.rhs.is(Kind::Sequence), "project needs a sequence: " + notation(t));
  const auto &parts = t.rhs.children();
  require(!positions.empty(), "project without positions");
  std::set<size_t> drop(positions.begin(), positions.end());
  require(drop.size() == positions.size(), "duplicate project position");
  require(*drop.rbegin() < parts.size(), "project position out of range");
  std::vector<Expr> kept;
  for (size_t i = 0; i < parts.size(); ++i)
    if (!drop.count(i)) kept.push_back(parts[i]);
  if (kept.empty()) return with_rhs(t, Expr::epsilon());
  if (kept.size() == 1) return with_rhs(t, kept.front());
  return with_rhs(t, Expr::sequence(std::move(kept)));
}

Production permute_result(const Production &t, const std::vector<size_t> &order) {
  require(t.rhs.is(Kind::Sequence), "permute needs a sequence: " + notation(t));
  const auto &parts = t.rhs.children();
  require(order.size() == parts.size(), "permutation length mismatch");
  std::vector<size_t> check = order;
  std::sort(check.begin(), check.end());
  for (size_t i = 0; i < check.size(); ++i) require(check[i] == i, "not a permutation");
  std::vector<Expr> out;
  for (size_t i : order) out.push_back(parts[i]);
  return with_rhs(t, Expr::sequence(std::move(out)));
}

Production unlabel_result(const Production &t, std::string *removed, bool *selector) {
  if (!t.label.empty()) {
    *removed = t.label;
    *selector = false;
    return {"", t.lhs, t.rhs};
  }
  require(t.rhs.is(Kind::Selector), "nothing to unlabel: " + notation(t));
  *removed = t.rhs.text();
  *selector = true;
  return {"", t.lhs, t.rhs.inner()};
}

Production designate_result(const step::Designate &s) {
  require(!s.label.empty(), "empty label");
  require(s.target.label.empty(), "already labeled: " + notation(s.target));
  if (s.selector) return {"", s.target.lhs, Expr::selector(s.label, s.target.rhs)};
  return {s.label, s.target.lhs, s.target.rhs};
}

void check_same_head(const Production &a, const Production &b) {
  require(a.lhs == b.lhs && a.label == b.label,
          "productions differ in head: " + notation(a) + " vs " + notation(b));
}

void check_new_definitions(const Grammar &g, const std::vector<Production> &ps) {
  require(!ps.empty(), "no productions given");
  const std::string &nt = ps.front().lhs;
  std::set<std::string> labels;
  for (const auto &p : ps) {
    require(p.lhs == nt, "productions define different nonterminals");
    require(p.label.empty() || labels.insert(p.label).second, "duplicate label " + p.label);
  }
  require(!g.defines(nt), nt + " is already defined");
}

// Visitor that applies one operator; returns the new grammar and fills the
// payload of its own copy of the step.
struct Applier {
  const Grammar &g;
  Grammar out;

  explicit Applier(const Grammar &in) : g(in), out(in) {}

  void operator()(step::RenameN &s) {
    require(s.from != s.to, "rename to itself: " + s.from);
    auto names = all_names(g);
    if (!names.count(s.from)) fail(XbgfFailure::TargetNotFound, s.from);
    if (names.count(s.to)) fail(XbgfFailure::NameClash, s.to + " already exists");
    for (auto &p : out.productions) {
      if (p.lhs == s.from) p.lhs = s.to;
      p.rhs = rename_nonterminal(p.rhs, s.from, s.to);
    }
    for (auto &r : out.roots)
      if (r == s.from) r = s.to;
  }

  void operator()(step::Reroot &s) {
    Usage u = usage(g);
    for (const auto &r : s.to)
      require(u.defined.count(r) || u.used.count(r), "unknown root " + r);
    s.from = g.roots;
    out.roots = s.to;
  }

  void operator()(step::Unlabel &s) {
    size_t i = locate(g, s.target);
    std::string removed;
    bool selector;
    out.productions[i] = unlabel_result(s.target, &removed, &selector);
  }

  void operator()(step::Designate &s) {
    size_t i = locate(g, s.target);
    Production r = designate_result(s);
    if (label_taken(g, r.lhs, r.label, i))
      fail(XbgfFailure::NameClash, "label " + r.label + " taken for " + r.lhs);
    out.productions[i] = r;
  }

  void operator()(step::Anonymize &s) {
    size_t i = locate(g, s.target);
    Production r = with_rhs(s.target, anonymized(s.target.rhs));
    require(r != s.target, "no selectors to remove: " + notation(s.target));
    s.result = r;
    out.productions[i] = r;
  }

  void operator()(step::Deanonymize &s) {
    size_t i = locate(g, s.target);
    check_same_head(s.target, s.restored);
    require(anonymized(s.restored.rhs) == s.target.rhs && s.restored != s.target,
            "deanonymize does not restore selectors of " + notation(s.target));
    out.productions[i] = s.restored;
  }

  void operator()(step::Abstractize &s) {
    size_t i = locate(g, s.target);
    Production r = with_rhs(s.target, abstracted(s.target.rhs));
    require(r != s.target, "no terminals to remove: " + notation(s.target));
    s.result = r;
    out.productions[i] = r;
  }

  void operator()(step::Concretize &s) {
    size_t i = locate(g, s.target);
    check_same_head(s.target, s.restored);
    require(abstracted(s.restored.rhs) == s.target.rhs && s.restored != s.target,
            "concretize does not restore terminals of " + notation(s.target));
    out.productions[i] = s.restored;
  }

  void operator()(step::Massage &s) {
    size_t i = locate(g, s.target);
    check_same_head(s.target, s.result);
    require(s.target != s.result, "massage without change");
    require(desugared(s.target.rhs) == desugared(s.result.rhs),
            "not an equivalent rewrite: " + notation(s.target) + " to " + notation(s.result));
    out.productions[i] = s.result;
  }

  void operator()(step::Vertical &s) {
    auto defs = g.definitions(s.nt);
    if (defs.empty()) fail(XbgfFailure::TargetNotFound, s.nt);
    require(std::any_of(defs.begin(), defs.end(),
                        [](const Production &p) { return p.rhs.is(Kind::Choice); }),
            "no choice to split in " + s.nt);
    s.original = defs;
    out.productions.clear();
    for (const auto &p : g.productions) {
      if (p.lhs == s.nt && p.rhs.is(Kind::Choice)) {
        for (const auto &alt : p.rhs.children()) out.productions.push_back({"", p.lhs, alt});
      } else {
        out.productions.push_back(p);
      }
    }
  }

  void operator()(step::Horizontal &s) {
    auto defs = g.definitions(s.nt);
    if (defs.empty()) fail(XbgfFailure::TargetNotFound, s.nt);
    std::vector<Production> merged;
    if (s.restore) {
      for (const auto &p : *s.restore) require(p.lhs == s.nt, "restore defines another symbol");
      require(sorted(split_choices(*s.restore)) == sorted(defs),
              "restore does not match the productions of " + s.nt);
      merged = *s.restore;
    } else {
      require(defs.size() >= 2, s.nt + " has fewer than two productions");
      std::vector<Expr> alts;
      for (const auto &p : defs) {
        require(p.label.empty(), "labeled production " + notation(p));
        require(!p.rhs.is(Kind::Choice), "nested choice in " + notation(p));
        alts.push_back(p.rhs);
      }
      merged.push_back({"", s.nt, Expr::choice(std::move(alts))});
      s.restore = merged;
    }
    size_t first = 0;
    while (g.productions[first].lhs != s.nt) ++first;
    out.productions.clear();
    for (size_t i = 0; i < g.productions.size(); ++i) {
      if (i == first) out.productions.insert(out.productions.end(), merged.begin(), merged.end());
      if (g.productions[i].lhs != s.nt) out.productions.push_back(g.productions[i]);
    }
  }

  void operator()(step::Undefine &s) {
    auto defs = g.definitions(s.nt);
    if (defs.empty()) fail(XbgfFailure::TargetNotFound, s.nt);
    s.saved = defs;
    erase_defs(out, s.nt);
  }

  void operator()(step::Define &s) {
    check_new_definitions(g, s.productions);
    out.productions.insert(out.productions.end(), s.productions.begin(), s.productions.end());
  }

  void operator()(step::Eliminate &s) {
    auto defs = g.definitions(s.nt);
    if (defs.empty()) fail(XbgfFailure::TargetNotFound, s.nt);
    require(!is_root(g, s.nt), s.nt + " is a root");
    require(uses_outside(g, s.nt) == 0, s.nt + " is still used");
    s.saved = defs;
    erase_defs(out, s.nt);
  }

  void operator()(step::Introduce &s) {
    check_new_definitions(g, s.productions);
    const std::string &nt = s.productions.front().lhs;
    require(use_count(g, nt) == 0, nt + " is already used");
    require(!is_root(g, nt), nt + " is a root");
    out.productions.insert(out.productions.end(), s.productions.begin(), s.productions.end());
  }

  void operator()(step::Unchain &s) {
    size_t ci = locate(g, s.chain);
    require(s.chain.rhs.is(Kind::Nonterminal), "not a chain: " + notation(s.chain));
    const std::string &x = s.chain.lhs;
    const std::string &y = s.chain.rhs.text();
    require(x != y, "reflexive chain " + notation(s.chain));
    require(!is_root(g, y), y + " is a root");
    auto defs = g.definitions(y);
    require(defs.size() == 1, y + " must have exactly one production");
    require(use_count(g, y) == 1, y + " is used outside the chain");
    if (s.definition) require(*s.definition == defs.front(), "definition payload mismatch");
    if (label_taken(g, x, y))
      fail(XbgfFailure::NameClash, "label " + y + " taken for " + x);
    s.definition = defs.front();
    size_t di = locate(g, defs.front());
    out.productions[di] = {y, x, defs.front().rhs};
    out.productions.erase(out.productions.begin() + static_cast<long>(ci));
  }

  void operator()(step::Chain &s) {
    size_t i = locate(g, s.target);
    Production chain;
    Production def;
    if (s.chain && s.definition) {
      chain = *s.chain;
      def = *s.definition;
      require(chain.lhs == s.target.lhs && chain.rhs.is_nonterminal(def.lhs) &&
                  def.rhs == s.target.rhs,
              "chain payload does not fit " + notation(s.target));
    } else {
      require(!s.target.label.empty(), "chain needs a label to name the new symbol");
      chain = {"", s.target.lhs, Expr::nonterminal(s.target.label)};
      def = {"", s.target.label, s.target.rhs};
    }
    if (all_names(g).count(def.lhs)) fail(XbgfFailure::NameClash, def.lhs + " already exists");
    if (label_taken(g, chain.lhs, chain.label, i))
      fail(XbgfFailure::NameClash, "label " + chain.label + " taken");
    out.productions[i] = def;
    out.productions.insert(out.productions.begin() + static_cast<long>(i), chain);
    s.chain = chain;
    s.definition = def;
  }

  void operator()(step::Abridge &s) {
    size_t i = locate(g, s.target);
    require(s.target.rhs.is_nonterminal(s.target.lhs), "not reflexive: " + notation(s.target));
    out.productions.erase(out.productions.begin() + static_cast<long>(i));
  }

  void operator()(step::Detour &s) {
    require(s.target.rhs.is_nonterminal(s.target.lhs), "not reflexive: " + notation(s.target));
    if (label_taken(g, s.target.lhs, s.target.label))
      fail(XbgfFailure::NameClash, "label " + s.target.label + " taken");
    out.productions.push_back(s.target);
  }

  // Replace each site's `before` by its `after`, one occurrence each.
  void replace_sites(const std::vector<step::Site> &sites) {
    std::vector<bool> done(out.productions.size(), false);
    for (const auto &site : sites) {
      size_t i = 0;
      while (i < out.productions.size() && (done[i] || out.productions[i] != site.before)) ++i;
      if (i == out.productions.size()) fail(XbgfFailure::TargetNotFound, notation(site.before));
      out.productions[i] = site.after;
      done[i] = true;
    }
  }

  void operator()(step::Extract &s) {
    const std::string &n = s.definition.lhs;
    if (all_names(g).count(n)) fail(XbgfFailure::NameClash, n + " already exists");
    Expr use = Expr::nonterminal(n);
    if (s.sites) {
      replace_sites(*s.sites);
    } else {
      if (!g.defines(s.scope)) fail(XbgfFailure::TargetNotFound, s.scope);
      std::vector<step::Site> sites;
      for (auto &p : out.productions) {
        if (p.lhs != s.scope) continue;
        int count = 0;
        Expr r = replace_subterm(p.rhs, s.definition.rhs, use, &count);
        if (count == 0) continue;
        Production after = with_rhs(p, r);
        sites.push_back({p, after});
        p = after;
      }
      if (sites.empty())
        fail(XbgfFailure::TargetNotFound, notation(s.definition.rhs) + " in " + s.scope);
      s.sites = sites;
    }
    out.productions.push_back(s.definition);
  }

  void operator()(step::Inline &s) {
    auto defs = g.definitions(s.nt);
    if (defs.empty()) fail(XbgfFailure::TargetNotFound, s.nt);
    require(defs.size() == 1, s.nt + " must have exactly one production");
    require(!is_root(g, s.nt), s.nt + " is a root");
    const Production def = defs.front();
    require(!mentions(def.rhs, s.nt), s.nt + " is recursive");
    if (s.definition) require(*s.definition == def, "definition payload mismatch");
    size_t di = locate(g, def);
    if (s.sites) {
      replace_sites(*s.sites);
    } else {
      std::vector<step::Site> sites;
      for (size_t i = 0; i < out.productions.size(); ++i) {
        if (i == di || !mentions(out.productions[i].rhs, s.nt)) continue;
        Production &p = out.productions[i];
        Production after = with_rhs(p, rewrite(p.rhs, [&](const Expr &x) {
                                      return x.is_nonterminal(s.nt) ? def.rhs : x;
                                    }));
        sites.push_back({p, after});
        p = after;
      }
      require(!sites.empty(), s.nt + " is not used");
      s.sites = sites;
    }
    s.definition = def;
    out.productions.erase(out.productions.begin() + static_cast<long>(di));
    require(use_count(out, s.nt) == 0, s.nt + " remains in use after inlining");
  }

  void operator()(step::Project &s) {
    size_t i = locate(g, s.target);
    Production r = project_result(s.target, s.positions);
    std::vector<std::pair<size_t, Expr>> removed;
    auto pos = s.positions;
    std::sort(pos.begin(), pos.end());
    for (size_t k : pos) removed.emplace_back(k, s.target.rhs.children()[k]);
    s.removed = removed;
    out.productions[i] = r;
  }

  void operator()(step::Inject &s) {
    size_t i = locate(g, s.target);
    std::vector<Expr> elems;
    const Expr &rhs = s.target.rhs;
    size_t kept = s.kept.value_or(rhs.is(Kind::Sequence) ? rhs.children().size()
                                  : rhs.is(Kind::Epsilon) ? 0
                                                          : 1);
    if (kept == 0) {
      require(rhs.is(Kind::Epsilon), "inject expects ε: " + notation(s.target));
    } else if (kept == 1) {
      elems.push_back(rhs);
    } else {
      require(rhs.is(Kind::Sequence) && rhs.children().size() == kept,
              "inject expects a sequence of " + std::to_string(kept) + ": " + notation(s.target));
      elems = rhs.children();
    }
    require(!s.insertions.empty(), "inject without insertions");
    size_t total = elems.size() + s.insertions.size();
    std::vector<std::optional<Expr>> slots(total);
    for (const auto &[k, e] : s.insertions) {
      require(k < total && !slots[k], "bad inject position " + std::to_string(k + 1));
      slots[k] = e;
    }
    size_t next = 0;
    std::vector<Expr> parts;
    for (auto &slot : slots) parts.push_back(slot ? *slot : elems[next++]);
    s.kept = kept;
    out.productions[i] =
        with_rhs(s.target, parts.size() == 1 ? parts.front() : Expr::sequence(std::move(parts)));
  }

  void change_multiplicity(const std::string &scope, const Expr &from, const Expr &to) {
    if (!g.defines(scope)) fail(XbgfFailure::TargetNotFound, scope);
    int before = 0;
    for (const auto &p : g.productions)
      if (p.lhs == scope) before += count_subterm(p.rhs, from);
    require(before == 1, notation(from) + " must occur exactly once in " + scope);
    int after = 0;
    for (auto &p : out.productions) {
      if (p.lhs != scope) continue;
      p.rhs = replace_subterm(p.rhs, from, to);
      after += count_subterm(p.rhs, to);
    }
    require(after == 1, notation(to) + " would not be unique in " + scope);
  }

  void operator()(step::Narrow &s) {
    bool ok = (s.from.is(Kind::Star) && s.to == Expr::plus(s.from.inner())) ||
              (s.from.is(Kind::Optional) && s.to == s.from.inner());
    require(ok, "unsupported narrowing " + notation(s.from) + " to " + notation(s.to));
    change_multiplicity(s.scope, s.from, s.to);
  }

  void operator()(step::Widen &s) {
    bool ok = (s.from.is(Kind::Plus) && s.to == Expr::star(s.from.inner())) ||
              s.to == Expr::optional(s.from);
    require(ok, "unsupported widening " + notation(s.from) + " to " + notation(s.to));
    change_multiplicity(s.scope, s.from, s.to);
  }

  void operator()(step::Permute &s) {
    size_t i = locate(g, s.target);
    out.productions[i] = permute_result(s.target, s.order);
  }

  void operator()(step::Unite &s) {
    require(s.from != s.into, "unite with itself: " + s.from);
    auto names = all_names(g);
    if (!names.count(s.from)) fail(XbgfFailure::TargetNotFound, s.from);
    if (!names.count(s.into)) fail(XbgfFailure::TargetNotFound, s.into);
    std::vector<step::Site> sites;
    for (auto &p : out.productions) {
      if (p.lhs != s.from && !mentions(p.rhs, s.from)) continue;
      Production after{p.label, p.lhs == s.from ? s.into : p.lhs,
                       rename_nonterminal(p.rhs, s.from, s.into)};
      sites.push_back({p, after});
      p = after;
    }
    std::set<std::pair<std::string, std::string>> labels;
    for (const auto &p : out.productions)
      require(p.label.empty() || labels.emplace(p.lhs, p.label).second,
              "unite makes label " + p.label + " ambiguous");
    std::vector<std::string> roots;
    for (const auto &r : g.roots) {
      std::string n = r == s.from ? s.into : r;
      if (std::find(roots.begin(), roots.end(), n) == roots.end()) roots.push_back(n);
    }
    out.roots = roots;
    s.sites = sites;
    s.roots = g.roots;
  }

  void operator()(step::SplitN &s) {
    require(!all_names(g).count(s.from), s.from + " already exists");
    replace_sites(s.sites);
    out.roots = s.roots;
  }

  void operator()(step::AssocIterate &s) {
    size_t i = locate(g, s.target);
    auto r = assoc_form(s.target.rhs);
    require(r.has_value(), "no iterated binary form in " + notation(s.target));
    Production res = with_rhs(s.target, *r);
    if (s.result) require(*s.result == res, "assoc result payload mismatch");
    s.result = res;
    out.productions[i] = res;
  }

  void operator()(step::Iterate &s) {
    size_t i = locate(g, s.target);
    check_same_head(s.target, s.restored);
    auto r = assoc_form(s.restored.rhs);
    require(r && *r == s.target.rhs, "iterate does not invert assoc on " + notation(s.target));
    out.productions[i] = s.restored;
  }
};

template <class T>
const T &need(const std::optional<T> &o, const char *what) {
  if (!o) fail(XbgfFailure::MissingPayload, what);
  return *o;
}

struct Inverter {
  Step operator()(const step::RenameN &s) const { return step::RenameN{s.to, s.from}; }
  Step operator()(const step::Reroot &s) const {
    return step::Reroot{need(s.from, "reroot"), s.to};
  }
  Step operator()(const step::Unlabel &s) const {
    std::string removed;
    bool selector;
    Production r = unlabel_result(s.target, &removed, &selector);
    return step::Designate{r, removed, selector};
  }
  Step operator()(const step::Designate &s) const { return step::Unlabel{designate_result(s)}; }
  Step operator()(const step::Anonymize &s) const {
    return step::Deanonymize{need(s.result, "anonymize"), s.target};
  }
  Step operator()(const step::Deanonymize &s) const {
    return step::Anonymize{s.restored, s.target};
  }
  Step operator()(const step::Abstractize &s) const {
    return step::Concretize{need(s.result, "abstractize"), s.target};
  }
  Step operator()(const step::Concretize &s) const {
    return step::Abstractize{s.restored, s.target};
  }
  Step operator()(const step::Massage &s) const { return step::Massage{s.result, s.target}; }
  Step operator()(const step::Vertical &s) const {
    return step::Horizontal{s.nt, need(s.original, "vertical")};
  }
  Step operator()(const step::Horizontal &s) const {
    need(s.restore, "horizontal");
    return step::Vertical{s.nt, std::nullopt};
  }
  Step operator()(const step::Undefine &s) const {
    return step::Define{need(s.saved, "undefine")};
  }
  Step operator()(const step::Define &s) const {
    return step::Undefine{s.productions.front().lhs, s.productions};
  }
  Step operator()(const step::Eliminate &s) const {
    return step::Introduce{need(s.saved, "eliminate")};
  }
  Step operator()(const step::Introduce &s) const {
    return step::Eliminate{s.productions.front().lhs, s.productions};
  }
  Step operator()(const step::Unchain &s) const {
    const Production &d = need(s.definition, "unchain");
    return step::Chain{Production{d.lhs, s.chain.lhs, d.rhs}, s.chain, d};
  }
  Step operator()(const step::Chain &s) const {
    return step::Unchain{need(s.chain, "chain"), need(s.definition, "chain")};
  }
  Step operator()(const step::Abridge &s) const { return step::Detour{s.target}; }
  Step operator()(const step::Detour &s) const { return step::Abridge{s.target}; }
  Step operator()(const step::Extract &s) const {
    std::vector<step::Site> back;
    for (const auto &site : need(s.sites, "extract")) back.push_back({site.after, site.before});
    return step::Inline{s.definition.lhs, s.definition, back};
  }
  Step operator()(const step::Inline &s) const {
    const auto &sites = need(s.sites, "inline");
    std::vector<step::Site> back;
    for (const auto &site : sites) back.push_back({site.after, site.before});
    std::string scope = sites.empty() ? std::string() : sites.front().before.lhs;
    return step::Extract{need(s.definition, "inline"), scope, back};
  }
  Step operator()(const step::Project &s) const {
    const auto &removed = need(s.removed, "project");
    size_t kept = s.target.rhs.children().size() - s.positions.size();
    return step::Inject{project_result(s.target, s.positions), removed, kept};
  }
  Step operator()(const step::Inject &s) const {
    std::vector<size_t> pos;
    for (const auto &ins : s.insertions) pos.push_back(ins.first);
    std::vector<Expr> parts;
    const Expr &rhs = s.target.rhs;
    size_t kept = need(s.kept, "inject");
    std::vector<Expr> elems = kept == 0   ? std::vector<Expr>{}
                              : kept == 1 ? std::vector<Expr>{rhs}
                                          : rhs.children();
    size_t total = elems.size() + s.insertions.size();
    std::vector<std::optional<Expr>> slots(total);
    for (const auto &[k, e] : s.insertions) slots[k] = e;
    size_t next = 0;
    for (auto &slot : slots) parts.push_back(slot ? *slot : elems[next++]);
    Production restored{s.target.label, s.target.lhs,
                        parts.size() == 1 ? parts.front() : Expr::sequence(parts)};
    auto ins = s.insertions;
    std::sort(ins.begin(), ins.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    std::sort(pos.begin(), pos.end());
    return step::Project{restored, pos, ins};
  }
  Step operator()(const step::Narrow &s) const { return step::Widen{s.scope, s.to, s.from}; }
  Step operator()(const step::Widen &s) const { return step::Narrow{s.scope, s.to, s.from}; }
  Step operator()(const step::Permute &s) const {
    std::vector<size_t> inv(s.order.size());
    for (size_t i = 0; i < s.order.size(); ++i) inv[s.order[i]] = i;
    return step::Permute{permute_result(s.target, s.order), inv};
  }
  Step operator()(const step::Unite &s) const {
    std::vector<step::Site> back;
    for (const auto &site : need(s.sites, "unite")) back.push_back({site.after, site.before});
    return step::SplitN{s.from, s.into, back, need(s.roots, "unite")};
  }
  Step operator()(const step::SplitN &s) const {
    return step::Unite{s.from, s.into, std::nullopt, std::nullopt};
  }
  Step operator()(const step::AssocIterate &s) const {
    return step::Iterate{need(s.result, "assoc"), s.target};
  }
  Step operator()(const step::Iterate &s) const {
    return step::AssocIterate{s.restored, s.target};
  }
};

}  // namespace

Expr absorb_epsilon(const Expr &e) {
  if (e.is(Kind::Selector)) return Expr::selector(e.text(), absorb(e.inner()));
  return absorb(e);
}

Expr anonymized(const Expr &e) {
  if (e.is(Kind::Selector)) return absorb_epsilon(Expr::selector(e.text(), strip_selectors(e.inner())));
  return absorb_epsilon(strip_selectors(e));
}

Expr abstracted(const Expr &e) {
  Expr bare = rewrite(e, [](const Expr &x) { return x.is(Kind::Terminal) ? Expr::epsilon() : x; });
  return absorb_epsilon(bare);
}

Expr desugared(const Expr &e) {
  return rewrite(e, [](const Expr &x) {
    if (x.is(Kind::SeparatedPlus)) {
      const Expr &item = x.children()[0];
      const Expr &sep = x.children()[1];
      return Expr::sequence({item, Expr::star(Expr::sequence({sep, item}))});
    }
    if (x.is(Kind::Sequence)) {
      std::vector<Expr> flat;
      for (const auto &k : x.children()) {
        if (k.is(Kind::Sequence)) {
          flat.insert(flat.end(), k.children().begin(), k.children().end());
        } else {
          flat.push_back(k);
        }
      }
      return Expr::sequence(std::move(flat));
    }
    return x;
  });
}

std::optional<Expr> assoc_form(const Expr &e) {
  if (!e.is(Kind::Sequence) || e.children().size() != 2) return std::nullopt;
  const Expr &a = e.children()[0];
  const Expr &b = e.children()[1];
  auto pair_in = [](const Expr &star) -> const std::vector<Expr> * {
    if (!star.is(Kind::Star) || !star.inner().is(Kind::Sequence) ||
        star.inner().children().size() != 2)
      return nullptr;
    return &star.inner().children();
  };
  if (auto *ob = pair_in(b); ob && strip_selectors(a) == strip_selectors((*ob)[1]))
    return Expr::sequence({a, (*ob)[0], (*ob)[1]});
  if (auto *ao = pair_in(a); ao && strip_selectors((*ao)[0]) == strip_selectors(b))
    return Expr::sequence({(*ao)[0], (*ao)[1], b});
  return std::nullopt;
}

Applied apply_step(const Grammar &g, const Step &s) {
  Applier ap(g);
  Step copy = s;
  std::visit(ap, copy);
  return {std::move(ap.out), std::move(copy)};
}

Step invert_step(const Step &s) { return std::visit(Inverter{}, s); }

Grammar apply_script(const Grammar &g, const Script &sc, Script *applied) {
  Grammar cur = g;
  for (size_t i = 0; i < sc.size(); ++i) {
    try {
      Applied a = apply_step(cur, sc[i]);
      cur = std::move(a.grammar);
      if (applied) applied->push_back(std::move(a.step));
    } catch (const XbgfError &e) {
      throw ScriptError(i, cur, e);
    }
  }
  return cur;
}

Script invert_script(const Script &sc) {
  Script out;
  for (auto it = sc.rbegin(); it != sc.rend(); ++it) out.push_back(invert_step(*it));
  return out;
}

namespace {

struct Namer {
  std::string operator()(const step::RenameN &) const { return "renameN"; }
  std::string operator()(const step::Reroot &) const { return "reroot"; }
  std::string operator()(const step::Unlabel &) const { return "unlabel"; }
  std::string operator()(const step::Designate &) const { return "designate"; }
  std::string operator()(const step::Anonymize &) const { return "anonymize"; }
  std::string operator()(const step::Deanonymize &) const { return "deanonymize"; }
  std::string operator()(const step::Abstractize &) const { return "abstractize"; }
  std::string operator()(const step::Concretize &) const { return "concretize"; }
  std::string operator()(const step::Massage &) const { return "massage"; }
  std::string operator()(const step::Vertical &) const { return "vertical"; }
  std::string operator()(const step::Horizontal &) const { return "horizontal"; }
  std::string operator()(const step::Undefine &) const { return "undefine"; }
  std::string operator()(const step::Define &) const { return "define"; }
  std::string operator()(const step::Eliminate &) const { return "eliminate"; }
  std::string operator()(const step::Introduce &) const { return "introduce"; }
  std::string operator()(const step::Unchain &) const { return "unchain"; }
  std::string operator()(const step::Chain &) const { return "chain"; }
  std::string operator()(const step::Abridge &) const { return "abridge"; }
  std::string operator()(const step::Detour &) const { return "detour"; }
  std::string operator()(const step::Extract &) const { return "extract"; }
  std::string operator()(const step::Inline &) const { return "inline"; }
  std::string operator()(const step::Project &) const { return "project"; }
  std::string operator()(const step::Inject &) const { return "inject"; }
  std::string operator()(const step::Narrow &) const { return "narrow"; }
  std::string operator()(const step::Widen &) const { return "widen"; }
  std::string operator()(const step::Permute &) const { return "permute"; }
  std::string operator()(const step::Unite &) const { return "unite"; }
  std::string operator()(const step::SplitN &) const { return "splitN"; }
  std::string operator()(const step::AssocIterate &) const { return "assoc"; }
  std::string operator()(const step::Iterate &) const { return "iterate"; }
};

}  // namespace

std::string step_name(const Step &s) { return std::visit(Namer{}, s); }

std::string step_family(const Step &s) {
  static const std::map<std::string, std::string> partner = {
      {"renameN", "renameN"},       {"reroot", "reroot"},     {"unlabel", "designate"},
      {"designate", "unlabel"},     {"anonymize", "deanonymize"},
      {"deanonymize", "anonymize"}, {"abstractize", "concretize"},
      {"concretize", "abstractize"}, {"massage", "massage"},  {"vertical", "horizontal"},
      {"horizontal", "vertical"},   {"undefine", "define"},   {"define", "undefine"},
      {"eliminate", "introduce"},   {"introduce", "eliminate"}, {"unchain", "chain"},
      {"chain", "unchain"},         {"abridge", "detour"},    {"detour", "abridge"},
      {"extract", "inline"},        {"inline", "extract"},    {"project", "inject"},
      {"inject", "project"},        {"narrow", "widen"},      {"widen", "narrow"},
      {"permute", "permute"},       {"unite", "splitN"},      {"splitN", "unite"},
      {"assoc", "iterate"},         {"iterate", "assoc"},
  };
  std::string n = step_name(s);
  return n + "-" + partner.at(n);
}

}  // namespace gramconv
