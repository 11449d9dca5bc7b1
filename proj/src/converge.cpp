#include "gramconv/converge.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "gramconv/bgf_text.hpp"
#include "gramconv/notation.hpp"

namespace gramconv {

Script ConvergenceResult::full_script() const {
  Script out = mutations;
  out.insert(out.end(), normalization.begin(), normalization.end());
  out.insert(out.end(), renames.begin(), renames.end());
  out.insert(out.end(), structural.begin(), structural.end());
  return out;
}

namespace {

// Applies steps one at a time, keeping the payload-carrying copies.
struct Recorder {
  Grammar g;
  Script steps;
  const char *phase;

  void apply(const Step &s) {
    try {
      Applied a = apply_step(g, s);
      g = std::move(a.grammar);
      steps.push_back(std::move(a.step));
    } catch (const XbgfError &e) {
      throw ConvergenceError(phase, step_name(s) + ": " + e.what());
    }
  }
};

bool reaches(const Grammar &g, const std::string &from, const std::string &to) {
  std::set<std::string> seen{from};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    std::string nt = queue.front();
    queue.pop_front();
    for (const auto &p : g.definitions(nt)) {
      for (const auto &r : referenced(p.rhs)) {
        if (r == to) return true;
        if (seen.insert(r).second) queue.push_back(r);
      }
    }
  }
  return false;
}

Expr without_selectors(const Expr &e) {
  return rewrite(e, [](const Expr &x) { return x.is(Kind::Selector) ? x.inner() : x; });
}

// `"(" B ")"` as some alternative of A, where B reaches back to A.
std::optional<Step> layer_unite(const Grammar &g) {
  for (const auto &p : g.productions) {
    std::vector<Expr> alts = p.rhs.is(Kind::Choice) ? p.rhs.children() : std::vector<Expr>{p.rhs};
    for (const auto &alt : alts) {
      Expr bare = without_selectors(alt);
      if (!bare.is(Kind::Sequence) || bare.children().size() != 3) continue;
      const auto &k = bare.children();
      if (k[0] != Expr::terminal("(") || k[2] != Expr::terminal(")") ||
          !k[1].is(Kind::Nonterminal))
        continue;
      const std::string &b = k[1].text();
      if (b != p.lhs && reaches(g, b, p.lhs))
        return step::Unite{p.lhs, b, std::nullopt, std::nullopt};
    }
  }
  return std::nullopt;
}

bool has_inner_selector(const Expr &rhs) {
  bool found = false;
  const Expr &body = rhs.is(Kind::Selector) ? rhs.inner() : rhs;
  visit(body, [&](const Expr &x) { found = found || x.is(Kind::Selector); });
  return found;
}

std::string fresh_label(const Grammar &g, const std::string &lhs) {
  std::string label = "tmplabel";
  for (int k = 2;; ++k) {
    bool taken = std::any_of(g.productions.begin(), g.productions.end(), [&](const Production &q) {
      return q.lhs == lhs && q.label == label;
    });
    if (!taken) return label;
    label = "tmplabel" + std::to_string(k);
  }
}

// Collapse one `X (O X)*` production, with label and selector bookkeeping.
bool iteration_collapse(Recorder &rec) {
  for (const auto &p : rec.g.productions) {
    auto flat = assoc_form(p.rhs);
    if (!flat) continue;
    Production cur = p;
    bool relabel = cur.label.empty();
    bool selectors = has_inner_selector(cur.rhs);
    if (relabel) {
      std::string label = fresh_label(rec.g, cur.lhs);
      rec.apply(step::Designate{cur, label, false});
      cur.label = label;
    }
    if (selectors) {
      rec.apply(step::Anonymize{cur, std::nullopt});
      cur.rhs = anonymized(cur.rhs);
    }
    rec.apply(step::AssocIterate{cur, std::nullopt});
    cur.rhs = *assoc_form(cur.rhs);
    if (selectors) {
      Production restored{cur.label, cur.lhs, *flat};
      rec.apply(step::Deanonymize{cur, restored});
      cur = restored;
    }
    if (relabel) rec.apply(step::Unlabel{cur});
    return true;
  }
  return false;
}

Expr rename_all(const Expr &e, const NominalMapping &m) {
  return rewrite(e, [&](const Expr &x) {
    if (!x.is(Kind::Nonterminal)) return x;
    Target t = m.lookup(x.text());
    return t ? Expr::nonterminal(*t) : x;
  });
}

Production rename_all(const Production &p, const NominalMapping &m) {
  Target t = m.lookup(p.lhs);
  return {p.label, t ? *t : p.lhs, rename_all(p.rhs, m)};
}

std::vector<Expr> parts(const Expr &rhs) {
  if (rhs.is(Kind::Sequence)) return rhs.children();
  if (rhs.is(Kind::Epsilon)) return {};
  return {rhs};
}

// Master-side form of a servant element, if narrowing applies.
std::optional<Expr> narrowed(const Expr &e) {
  if (e.is(Kind::Star)) return Expr::plus(e.inner());
  if (e.is(Kind::Optional)) return e.inner();
  return std::nullopt;
}

size_t find_production(const Grammar &g, const Production &p) {
  auto it = std::find(g.productions.begin(), g.productions.end(), p);
  if (it == g.productions.end()) throw ConvergenceError("structural", "lost track of " + notation(p));
  return static_cast<size_t>(it - g.productions.begin());
}

}  // namespace

std::pair<Grammar, Script> trigger_mutations(const Grammar &servant, const Grammar &) {
  Recorder rec{servant, {}, "mutate"};
  while (auto s = layer_unite(rec.g)) rec.apply(*s);
  while (iteration_collapse(rec)) {
  }
  return {rec.g, rec.steps};
}

Script nominal_resolution(const NominalMapping &mapping, const Grammar &servant) {
  std::vector<std::pair<std::string, std::string>> todo;
  for (const auto &[from, to] : mapping.pairs)
    if (to && *to != from) todo.emplace_back(from, *to);
  std::set<std::string> names = all_names(servant);
  auto fresh = [&](const std::string &base) {
    std::string n = base + "_tmp";
    for (int k = 2; names.count(n); ++k) n = base + "_tmp" + std::to_string(k);
    return n;
  };
  Script out;
  auto rename = [&](const std::string &from, const std::string &to) {
    out.push_back(step::RenameN{from, to});
    names.erase(from);
    names.insert(to);
  };
  for (size_t k = 0; k < todo.size(); ++k) {
    const auto [from, to] = todo[k];
    if (names.count(to)) {
      auto later = std::find_if(todo.begin() + static_cast<long>(k) + 1, todo.end(),
                                [&](const auto &pr) { return pr.first == to; });
      if (later == todo.end())
        throw ConvergenceError("rename", "cannot rename " + from + " to " + to +
                                             ": the name is taken and not renamed away");
      std::string tmp = fresh(to);
      rename(to, tmp);
      later->first = tmp;
    }
    rename(from, to);
  }
  return out;
}

Script structural_resolution(const Grammar &renamed, const Grammar &master,
                             const GrammarMatch &match) {
  Recorder rec{renamed, {}, "structural"};
  const NominalMapping &m = match.mapping;

  if (std::set(rec.g.roots.begin(), rec.g.roots.end()) !=
      std::set(master.roots.begin(), master.roots.end()))
    rec.apply(step::Reroot{master.roots, std::nullopt});

  struct Tracked {
    Production current;
    Production master;
    std::set<std::string> omitted;
  };
  std::vector<Tracked> tracked;
  std::set<std::string> matched_lhs;
  for (const auto &pair : match.pairs) {
    if (!pair.master) continue;
    Tracked t{rename_all(pair.servant, m), *pair.master, {}};
    for (const auto &ev : pair.kind->evidence)
      if (ev.kind == Evidence::Kind::Omitted) t.omitted.insert(ev.servant);
    matched_lhs.insert(t.current.lhs);
    tracked.push_back(std::move(t));
  }

  auto update = [&](Tracked &t, const Step &s) {
    size_t i = find_production(rec.g, t.current);
    rec.apply(s);
    t.current = rec.g.productions[i];
  };

  for (auto &t : tracked) {
    for (size_t pos = 0; pos < parts(t.current.rhs).size();) {
      Expr el = parts(t.current.rhs)[pos];
      const Expr &base = el.is(Kind::Nonterminal) ? el : el.inner();
      if (t.omitted.count(base.text()) && t.current.rhs.is(Kind::Sequence)) {
        update(t, step::Project{t.current, {pos}, std::nullopt});
      } else {
        ++pos;
      }
    }
  }

  std::vector<std::string> dropped;
  for (const auto &pair : match.pairs) {
    if (pair.master) continue;
    std::string lhs = rename_all(pair.servant, m).lhs;
    if (std::find(dropped.begin(), dropped.end(), lhs) != dropped.end()) continue;
    if (matched_lhs.count(lhs))
      throw ConvergenceError("structural", "unmatched " + notation(pair.servant) +
                                               " shares its nonterminal with matched productions");
    dropped.push_back(lhs);
    rec.apply(step::Eliminate{lhs, std::nullopt});
  }

  for (auto &t : tracked) {
    std::vector<Expr> want = parts(t.master.rhs);
    std::vector<Expr> have = parts(t.current.rhs);
    std::vector<bool> spare(want.size(), true);
    std::vector<bool> settled(have.size(), false);
    for (size_t i = 0; i < have.size(); ++i) {
      for (size_t j = 0; j < want.size(); ++j) {
        if (spare[j] && want[j] == have[i]) {
          spare[j] = false;
          settled[i] = true;
          break;
        }
      }
    }
    for (size_t i = 0; i < have.size(); ++i) {
      if (settled[i]) continue;
      auto to = narrowed(have[i]);
      if (!to) continue;
      for (size_t j = 0; j < want.size(); ++j) {
        if (spare[j] && want[j] == *to) {
          spare[j] = false;
          update(t, step::Narrow{t.current.lhs, have[i], *to});
          break;
        }
      }
    }
  }

  for (auto &t : tracked) {
    std::vector<Expr> want = parts(t.master.rhs);
    std::vector<Expr> have = parts(t.current.rhs);
    if (have == want || !t.current.rhs.is(Kind::Sequence) || have.size() != want.size()) continue;
    std::vector<size_t> order;
    std::vector<bool> used(have.size(), false);
    for (const auto &w : want) {
      size_t j = 0;
      while (j < have.size() && (used[j] || have[j] != w)) ++j;
      if (j == have.size())
        throw ConvergenceError("structural", "cannot reorder " + notation(t.current) + " into " +
                                                 notation(t.master));
      used[j] = true;
      order.push_back(j);
    }
    update(t, step::Permute{t.current, order});
  }

  return rec.steps;
}

ConvergenceResult converge(const Grammar &servant, const Grammar &master) {
  ConvergenceResult r;
  r.servant = servant;
  std::tie(r.mutated, r.mutations) = trigger_mutations(servant, master);
  try {
    AnfGrammar anf = normalize(r.mutated);
    r.normalization = std::move(anf.trace);
    r.anf = std::move(anf.grammar);
  } catch (const NormalizationError &e) {
    throw ConvergenceError("normalize", e.what());
  }
  try {
    r.match = match_grammars(r.anf, master);
  } catch (const MatchError &e) {
    throw ConvergenceError("match", e.what());
  }
  Script renames = nominal_resolution(r.match.mapping, r.anf);
  Grammar renamed;
  try {
    renamed = apply_script(r.anf, renames, &r.renames);
  } catch (const ScriptError &e) {
    throw ConvergenceError("rename", e.what());
  }
  r.structural = structural_resolution(renamed, master, r.match);
  r.final = apply_script(renamed, r.structural);
  if (!canonical_eq(r.final, master)) {
    std::string detail = "result differs from the master:\n" + serialize_bgf(r.final);
    throw ConvergenceError("verify", detail);
  }
  return r;
}

bool verify(const Grammar &servant, const Script &script, const Grammar &master, std::string *why) {
  try {
    Grammar out = apply_script(servant, script);
    if (canonical_eq(out, master)) return true;
    if (why) *why = "result differs from the master";
  } catch (const ScriptError &e) {
    if (why) *why = e.what();
  }
  return false;
}

}  // namespace gramconv
