#include "oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace testsupport {

using namespace gramconv;

namespace {

struct Item {
  std::string name;
  char mark;  // '1', '+', '*', '?'
};

std::vector<Item> items(const Expr &rhs) {
  auto one = [](const Expr &e) -> Item {
    if (e.is(Kind::Nonterminal)) return {e.text(), '1'};
    char mark = e.is(Kind::Plus) ? '+' : e.is(Kind::Star) ? '*' : '?';
    return {e.inner().text(), mark};
  };
  if (rhs.is(Kind::Sequence)) {
    std::vector<Item> out;
    for (const auto &k : rhs.children()) out.push_back(one(k));
    return out;
  }
  return {one(rhs)};
}

bool fits(char servant, char master) {
  return servant == master || (servant == '*' && master == '+') || (servant == '?' && master == '1');
}

// Name binding kept as two maps so injectivity is cheap to test.
struct Binding {
  std::map<std::string, std::optional<std::string>> fwd;
  std::map<std::string, std::string> back;

  bool bind(const std::string &s, const std::optional<std::string> &t) {
    auto it = fwd.find(s);
    if (it != fwd.end()) return it->second == t;
    if (t) {
      if (back.count(*t)) return false;
      back[*t] = s;
    }
    fwd[s] = t;
    return true;
  }
};

// Every way to match one servant production against one master production
// under `b`: positional bijection from master items to servant items, with
// the remaining servant items dropped. Reports each binding and strength.
void each_match(const Production &s, const Production &m, const Binding &b,
                const std::function<void(const Binding &, bool)> &fn) {
  Binding start = b;
  if (!start.bind(s.lhs, m.lhs)) return;
  std::vector<Item> si = items(s.rhs), mi = items(m.rhs);
  if (mi.size() > si.size()) return;
  std::vector<int> pick(mi.size(), -1);
  std::vector<bool> used(si.size(), false);
  std::function<void(size_t, Binding)> go = [&](size_t j, Binding cur) {
    if (j == mi.size()) {
      for (size_t i = 0; i < si.size(); ++i)
        if (!used[i] && !cur.bind(si[i].name, std::nullopt)) return;
      bool strong = si.size() == mi.size();
      for (size_t k = 0; strong && k < mi.size(); ++k)
        strong = pick[k] == static_cast<int>(k) && si[k].mark == mi[k].mark;
      fn(cur, strong);
      return;
    }
    for (size_t i = 0; i < si.size(); ++i) {
      if (used[i] || !fits(si[i].mark, mi[j].mark)) continue;
      Binding next = cur;
      if (!next.bind(si[i].name, mi[j].name)) continue;
      used[i] = true;
      pick[j] = static_cast<int>(i);
      go(j + 1, next);
      used[i] = false;
    }
  };
  go(0, start);
}

// Master productions in list order; each tries every free servant production.
struct Search {
  const std::vector<Production> &s, &m;
  std::vector<bool> used;
  std::optional<int> best;

  void run(size_t j, const Binding &b, int strong) {
    if (j == m.size()) {
      if (!best || strong > *best) best = strong;
      return;
    }
    if (best && strong + static_cast<int>(m.size() - j) <= *best) return;
    for (size_t i = 0; i < s.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      each_match(s[i], m[j], b, [&](const Binding &nb, bool st) { run(j + 1, nb, strong + st); });
      used[i] = false;
    }
  }
};

}  // namespace

std::optional<int> oracle_best_strong(const Grammar &servant, const Grammar &master) {
  Search search{servant.productions, master.productions,
                std::vector<bool>(servant.productions.size(), false), std::nullopt};
  search.run(0, Binding{}, 0);
  return search.best;
}

std::string check_matching(const Grammar &servant, const Grammar &master, const GrammarMatch &gm) {
  if (gm.pairs.size() != servant.productions.size()) return "pair count differs from servant size";
  std::vector<int> hits(master.productions.size(), 0);
  Binding b;
  for (const auto &[from, to] : gm.mapping.pairs)
    if (!b.bind(from, to)) return "mapping is not an injective function at " + from;
  int strong = 0;
  for (const auto &pair : gm.pairs) {
    if (!pair.master) continue;
    auto it = std::find(master.productions.begin(), master.productions.end(), *pair.master);
    if (it == master.productions.end()) return "matched against a foreign production";
    ++hits[static_cast<size_t>(it - master.productions.begin())];
    bool any = false, any_strong = false;
    each_match(pair.servant, *pair.master, b, [&](const Binding &nb, bool st) {
      // The pair must be realizable without extending the declared mapping.
      if (nb.fwd.size() != b.fwd.size()) return;
      any = true;
      any_strong = any_strong || st;
    });
    if (!any) return "pair is not a match under the mapping";
    if (pair.kind->strong != any_strong) return "strength of a pair is misreported";
    strong += pair.kind->strong;
  }
  for (int h : hits)
    if (h != 1) return "master productions not covered exactly once";
  if (strong != gm.strong_count) return "strong count disagrees with pairs";
  return "";
}

}  // namespace testsupport
