#include "gramconv/anf.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "gramconv/notation.hpp"

namespace gramconv {

namespace {

bool nonterminal_or_iterated(const Expr &e) {
  return e.is(Kind::Nonterminal) || (e.is_iteration() && e.inner().is(Kind::Nonterminal));
}

bool is_void(const Expr &e) { return e.is(Kind::Epsilon) || e.is(Kind::Empty); }

bool is_root(const Grammar &g, const std::string &nt) {
  return std::find(g.roots.begin(), g.roots.end(), nt) != g.roots.end();
}

// Nonterminals in order of their first definition.
std::vector<std::string> defined_in_order(const Grammar &g) {
  std::vector<std::string> out;
  for (const auto &p : g.productions)
    if (std::find(out.begin(), out.end(), p.lhs) == out.end()) out.push_back(p.lhs);
  return out;
}

// First subterm that keeps `rhs` out of ANF, outermost first.
std::optional<Expr> offending(const Expr &rhs) {
  if (rhs.is_iteration()) {
    if (rhs.inner().is(Kind::Nonterminal)) return std::nullopt;
    return rhs.inner();
  }
  if (!rhs.is(Kind::Sequence)) return std::nullopt;
  for (const auto &el : rhs.children()) {
    if (el.is(Kind::Sequence) || el.is(Kind::Choice)) return el;
    if (el.is_iteration() && !el.inner().is(Kind::Nonterminal)) return el.inner();
  }
  return std::nullopt;
}

class Normalizer {
 public:
  explicit Normalizer(const Grammar &g) : g_(g) {}

  AnfGrammar run() {
    budget_ = 10 * std::max<size_t>(1, g_.productions.size());
    if (is_anf(g_)) {
      settle({&Normalizer::reroot});
      return {g_, trace_};
    }
    settle({&Normalizer::reroot, &Normalizer::unlabel, &Normalizer::anonymize,
            &Normalizer::abstractize, &Normalizer::massage, &Normalizer::vertical,
            &Normalizer::drop_void, &Normalizer::extract_nested});
    settle({&Normalizer::unchain});
    settle({&Normalizer::abridge});
    settle({&Normalizer::unlabel});
    settle({&Normalizer::inline_chain});
    settle({&Normalizer::extract_alternative});
    if (!is_anf(g_))
      throw NormalizationError(NormalizationError::Kind::Unsupported,
                               "no normalization applies but the grammar is not in ANF");
    return {g_, trace_};
  }

 private:
  using Phase = std::optional<Step> (Normalizer::*)();

  // Apply the first applicable phase, restarting from the first, until none applies.
  void settle(std::initializer_list<Phase> phases) {
    for (;;) {
      std::optional<Step> s;
      for (Phase phase : phases)
        if ((s = (this->*phase)())) break;
      if (!s) return;
      if (trace_.size() == budget_)
        throw NormalizationError(NormalizationError::Kind::Diverged,
                                 "step budget of " + std::to_string(budget_) + " exceeded");
      try {
        Applied a = apply_step(g_, *s);
        g_ = std::move(a.grammar);
        trace_.push_back(std::move(a.step));
      } catch (const XbgfError &e) {
        throw NormalizationError(NormalizationError::Kind::Unsupported,
                                 step_name(*s) + " failed: " + e.what());
      }
    }
  }

  std::optional<Step> reroot() {
    if (!g_.roots.empty()) return std::nullopt;
    auto roots = detect_roots(g_);
    if (roots.empty()) return std::nullopt;
    return step::Reroot{roots, std::nullopt};
  }

  std::optional<Step> unlabel() {
    for (const auto &p : g_.productions)
      if (!p.label.empty()) return step::Unlabel{p};
    for (const auto &p : g_.productions)
      if (p.rhs.is(Kind::Selector)) return step::Unlabel{p};
    return std::nullopt;
  }

  std::optional<Step> anonymize() {
    for (const auto &p : g_.productions)
      if (guarded([&] { return anonymized(p.rhs); }, p) != p.rhs)
        return step::Anonymize{p, std::nullopt};
    return std::nullopt;
  }

  std::optional<Step> abstractize() {
    for (const auto &p : g_.productions)
      if (guarded([&] { return abstracted(p.rhs); }, p) != p.rhs)
        return step::Abstractize{p, std::nullopt};
    return std::nullopt;
  }

  std::optional<Step> massage() {
    for (const auto &p : g_.productions) {
      bool found = false;
      visit(p.rhs, [&](const Expr &x) { found = found || x.is(Kind::SeparatedPlus); });
      if (found) return step::Massage{p, {p.label, p.lhs, desugared(p.rhs)}};
    }
    return std::nullopt;
  }

  std::optional<Step> vertical() {
    for (const auto &p : g_.productions)
      if (p.rhs.is(Kind::Choice)) return step::Vertical{p.lhs, std::nullopt};
    return std::nullopt;
  }

  // Undefine used or root symbols whose definitions are all ε or φ;
  // eliminate unused ones.
  std::optional<Step> drop_void() {
    for (const auto &nt : defined_in_order(g_)) {
      auto defs = g_.definitions(nt);
      size_t voids = std::count_if(defs.begin(), defs.end(),
                                   [](const Production &p) { return is_void(p.rhs); });
      if (voids == 0) continue;
      if (voids != defs.size())
        throw NormalizationError(NormalizationError::Kind::Unsupported,
                                 nt + " mixes ε or φ with other definitions");
      if (use_count(g_, nt) > 0 || is_root(g_, nt)) return step::Undefine{nt, std::nullopt};
      return step::Eliminate{nt, std::nullopt};
    }
    return std::nullopt;
  }

  std::optional<Step> unchain() {
    for (const auto &p : g_.productions) {
      if (!p.rhs.is(Kind::Nonterminal)) continue;
      const std::string &y = p.rhs.text();
      if (y == p.lhs || is_root(g_, y)) continue;
      if (g_.definitions(y).size() != 1 || use_count(g_, y) != 1) continue;
      bool clash = std::any_of(g_.productions.begin(), g_.productions.end(),
                               [&](const Production &q) { return q.lhs == p.lhs && q.label == y; });
      if (!clash) return step::Unchain{p, std::nullopt};
    }
    return std::nullopt;
  }

  std::optional<Step> abridge() {
    for (const auto &p : g_.productions)
      if (p.rhs.is_nonterminal(p.lhs)) return step::Abridge{p};
    return std::nullopt;
  }

  std::optional<Step> inline_chain() {
    for (const auto &nt : defined_in_order(g_)) {
      auto defs = g_.definitions(nt);
      if (defs.size() != 1 || is_root(g_, nt)) continue;
      const Expr &rhs = defs.front().rhs;
      if (!rhs.is(Kind::Nonterminal) || rhs.text() == nt) continue;
      if (use_count(g_, nt) > 0) return step::Inline{nt, std::nullopt, std::nullopt};
    }
    return std::nullopt;
  }

  std::optional<Step> extract_alternative() {
    for (const auto &p : g_.productions) {
      if (p.rhs.is(Kind::Nonterminal) || g_.definitions(p.lhs).size() < 2) continue;
      return extract(p.lhs, p.rhs);
    }
    return std::nullopt;
  }

  std::optional<Step> extract_nested() {
    for (const auto &p : g_.productions)
      if (auto e = offending(p.rhs)) return extract(p.lhs, *e);
    return std::nullopt;
  }

  Step extract(const std::string &scope, const Expr &e) {
    auto names = all_names(g_);
    int &k = counter_[scope];
    std::string name;
    do {
      name = scope + "_" + std::to_string(++k);
    } while (names.count(name));
    return step::Extract{{"", name, e}, scope, std::nullopt};
  }

  template <class F>
  Expr guarded(F &&f, const Production &p) {
    try {
      return f();
    } catch (const XbgfError &e) {
      throw NormalizationError(NormalizationError::Kind::Unsupported,
                               notation(p) + ": " + e.what());
    }
  }

  Grammar g_;
  Script trace_;
  size_t budget_ = 0;
  std::map<std::string, int> counter_;
};

}  // namespace

std::vector<std::string> detect_roots(const Grammar &g) {
  Usage u = usage(g);
  if (u.top.empty()) return g.roots;
  std::vector<std::string> top;
  for (const auto &nt : defined_in_order(g))
    if (u.top.count(nt)) top.push_back(nt);
  std::vector<std::string> preferred;
  for (const auto &nt : top) {
    bool reaches = false;
    for (const auto &p : g.definitions(nt))
      for (const auto &r : referenced(p.rhs)) reaches = reaches || u.defined.count(r);
    if (reaches) preferred.push_back(nt);
  }
  return preferred.empty() ? top : preferred;
}

AnfGrammar normalize(const Grammar &g) { return Normalizer(g).run(); }

bool is_anf_rhs(const Expr &e) {
  if (nonterminal_or_iterated(e)) return true;
  if (!e.is(Kind::Sequence)) return false;
  return std::all_of(e.children().begin(), e.children().end(), nonterminal_or_iterated);
}

bool is_anf(const Grammar &g) {
  std::map<std::string, int> defs;
  for (const auto &p : g.productions) ++defs[p.lhs];
  return std::all_of(g.productions.begin(), g.productions.end(), [&](const Production &p) {
    if (!p.label.empty() || !is_anf_rhs(p.rhs)) return false;
    return defs[p.lhs] == 1 || p.rhs.is(Kind::Nonterminal);
  });
}

}  // namespace gramconv
