#include "gramconv/prodsig.hpp"

#include <algorithm>

#include "gramconv/anf.hpp"
#include "gramconv/notation.hpp"

namespace gramconv {

namespace {

struct Element {
  std::string nt;
  char mark;
  friend bool operator==(const Element &, const Element &) = default;
};

int rank(char mark) {
  switch (mark) {
    case '1': return 0;
    case '+': return 1;
    case '*': return 2;
    default: return 3;
  }
}

Element element(const Expr &e) {
  switch (e.kind()) {
    case Kind::Plus: return {e.inner().text(), '+'};
    case Kind::Star: return {e.inner().text(), '*'};
    case Kind::Optional: return {e.inner().text(), '?'};
    default: return {e.text(), '1'};
  }
}

std::vector<Element> elements(const Production &p) {
  if (!is_anf_rhs(p.rhs)) throw MatchError(MatchError::Kind::NotAnf, "not in ANF: " + notation(p));
  if (!p.rhs.is(Kind::Sequence)) return {element(p.rhs)};
  std::vector<Element> out;
  for (const auto &k : p.rhs.children()) out.push_back(element(k));
  return out;
}

int count(const std::string &pattern, char mark) {
  return static_cast<int>(std::count(pattern.begin(), pattern.end(), mark));
}

// Servant pattern `s` covers master pattern `m` when narrowing some `*` to `+`
// and some `?` to `1` turns one into the other.
bool coverable(const std::string &s, const std::string &m) {
  int star = count(s, '*') - count(m, '*');
  int opt = count(s, '?') - count(m, '?');
  return star >= 0 && opt >= 0 && count(s, '+') + star == count(m, '+') &&
         count(s, '1') + opt == count(m, '1');
}

bool narrowable(char from, char to) { return from == to || (from == '*' && to == '+') || (from == '?' && to == '1'); }

// Record s ↦ t unless it contradicts `m` or breaks injectivity.
bool bind_name(PartialMapping &m, const std::string &s, const Target &t) {
  if (auto it = m.find(s); it != m.end()) return it->second == t;
  if (t)
    for (const auto &[k, v] : m)
      if (v == t) return false;
  m.emplace(s, t);
  return true;
}

struct AlignmentSearch {
  const Production &servant;
  const Production &master;
  Signature sp, sq;
  std::vector<Element> ep, eq;
  std::vector<int> partner;  // master entry -> servant entry
  std::vector<bool> taken;
  std::vector<Alignment> strong, weak;

  AlignmentSearch(const Production &s, const Production &m)
      : servant(s),
        master(m),
        sp(production_signature(s)),
        sq(production_signature(m)),
        ep(elements(s)),
        eq(elements(m)),
        partner(sq.size(), -1),
        taken(sp.size(), false) {}

  void run(const PartialMapping &m, size_t j) {
    if (j == sq.size()) return finish(m);
    for (size_t i = 0; i < sp.size(); ++i) {
      if (taken[i] || !coverable(sp[i].pattern, sq[j].pattern)) continue;
      PartialMapping ext = m;
      if (!bind_name(ext, sp[i].nt, sq[j].nt)) continue;
      taken[i] = true;
      partner[j] = static_cast<int>(i);
      run(ext, j + 1);
      taken[i] = false;
    }
  }

  void finish(PartialMapping m) {
    MatchKind kind;
    for (size_t i = 0; i < sp.size(); ++i) {
      if (taken[i]) continue;
      if (!bind_name(m, sp[i].nt, std::nullopt)) return;
      kind.evidence.push_back({Evidence::Kind::Omitted, sp[i].nt, "", sp[i].pattern, ""});
    }
    for (size_t j = 0; j < sq.size(); ++j) {
      const SigEntry &s = sp[static_cast<size_t>(partner[j])];
      if (s.pattern != sq[j].pattern)
        kind.evidence.push_back(
            {Evidence::Kind::Multiplicity, s.nt, sq[j].nt, s.pattern, sq[j].pattern});
    }
    std::vector<Element> kept;
    for (const auto &e : ep)
      if (const auto &t = m.at(e.nt)) kept.push_back({*t, e.mark});
    bool in_order = kept.size() == eq.size();
    for (size_t k = 0; in_order && k < kept.size(); ++k)
      in_order = kept[k].nt == eq[k].nt && narrowable(kept[k].mark, eq[k].mark);
    if (!in_order) kind.evidence.push_back({Evidence::Kind::Order, "", "", "", ""});
    kind.strong = kind.evidence.empty();
    if (kind.strong) {
      strong.push_back({kind, std::move(m)});
    } else {
      weak.push_back({kind, std::move(m)});
    }
  }
};

}  // namespace

Signature production_signature(const Production &p) {
  std::map<std::string, std::string> marks;
  for (const auto &e : elements(p)) marks[e.nt] += e.mark;
  Signature out;
  for (auto &[nt, pattern] : marks) {
    std::sort(pattern.begin(), pattern.end(), [](char a, char b) { return rank(a) < rank(b); });
    out.push_back({nt, pattern});
  }
  return out;
}

std::string format_signature(const Signature &s) {
  std::string out = "{";
  for (size_t i = 0; i < s.size(); ++i)
    out += (i ? ", " : "") + std::string("⟨") + s[i].nt + ", " + s[i].pattern + "⟩";
  return out + "}";
}

Target NominalMapping::lookup(const std::string &servant) const {
  for (const auto &[s, t] : pairs)
    if (s == servant) return t;
  return std::nullopt;
}

bool NominalMapping::contains(const std::string &servant) const {
  return std::any_of(pairs.begin(), pairs.end(), [&](const auto &pr) { return pr.first == servant; });
}

std::vector<Alignment> alignments(const Production &servant, const Production &master,
                                  const PartialMapping &m) {
  PartialMapping base = m;
  if (!bind_name(base, servant.lhs, master.lhs)) return {};
  AlignmentSearch search(servant, master);
  search.run(base, 0);
  std::vector<Alignment> out = std::move(search.strong);
  out.insert(out.end(), search.weak.begin(), search.weak.end());
  return out;
}

bool strong_match(const Production &servant, const Production &master, const PartialMapping &m) {
  auto all = alignments(servant, master, m);
  return !all.empty() && all.front().kind.strong;
}

std::optional<MatchKind> weak_match(const Production &servant, const Production &master,
                                    const PartialMapping &m) {
  auto all = alignments(servant, master, m);
  if (all.empty()) return std::nullopt;
  return all.front().kind;
}

namespace {

class GrammarSearch {
 public:
  GrammarSearch(const Grammar &servant, const Grammar &master)
      : s_(servant.productions),
        m_(master.productions),
        servant_roots_(servant.roots),
        master_roots_(master.roots),
        assign_(m_.size(), -1),
        kinds_(m_.size()),
        used_(s_.size(), false) {
    for (const auto &p : s_) production_signature(p);
    for (const auto &p : m_) production_signature(p);
  }

  GrammarMatch run() {
    search(PartialMapping{}, 0, 0);
    if (!found_) throw MatchError(MatchError::Kind::NoCompleteMatch, "no complete matching of master productions");
    GrammarMatch out;
    out.strong_count = best_strong_;
    std::vector<int> owner(s_.size(), -1);
    for (size_t j = 0; j < m_.size(); ++j) owner[static_cast<size_t>(best_assign_[j])] = static_cast<int>(j);
    for (size_t i = 0; i < s_.size(); ++i) {
      MatchedPair pair{s_[i], std::nullopt, std::nullopt};
      if (owner[i] >= 0) {
        pair.master = m_[static_cast<size_t>(owner[i])];
        pair.kind = best_kinds_[static_cast<size_t>(owner[i])];
      }
      out.pairs.push_back(pair);
    }
    for (size_t i = 0; i < s_.size(); ++i) {
      if (owner[i] < 0) continue;
      std::vector<std::string> names{s_[i].lhs};
      for (const auto &r : referenced(s_[i].rhs)) names.push_back(r);
      for (const auto &n : names)
        if (!out.mapping.contains(n)) out.mapping.pairs.emplace_back(n, best_mapping_.at(n));
    }
    return out;
  }

 private:
  struct Option {
    size_t servant;
    Alignment alignment;
  };

  void search(const PartialMapping &m, size_t assigned, int strong) {
    if (done_) return;
    size_t remaining = m_.size() - assigned;
    if (found_ && strong + static_cast<int>(remaining) < best_strong_) return;
    if (remaining == 0) return record(m, strong);

    size_t pick = m_.size();
    std::vector<Option> options;
    for (size_t j = 0; j < m_.size(); ++j) {
      if (assign_[j] >= 0) continue;
      std::vector<Option> strong_opts, weak_opts;
      for (size_t i = 0; i < s_.size(); ++i) {
        if (used_[i]) continue;
        for (auto &a : alignments(s_[i], m_[j], m))
          (a.kind.strong ? strong_opts : weak_opts).push_back({i, std::move(a)});
      }
      strong_opts.insert(strong_opts.end(), weak_opts.begin(), weak_opts.end());
      if (strong_opts.empty()) return;
      if (pick == m_.size() || strong_opts.size() < options.size()) {
        pick = j;
        options = std::move(strong_opts);
      }
    }
    for (auto &o : options) {
      assign_[pick] = static_cast<int>(o.servant);
      kinds_[pick] = o.alignment.kind;
      used_[o.servant] = true;
      search(o.alignment.extension, assigned + 1, strong + (o.alignment.kind.strong ? 1 : 0));
      used_[o.servant] = false;
      assign_[pick] = -1;
      if (done_) return;
    }
  }

  void record(const PartialMapping &m, int strong) {
    int roots = 0;
    for (const auto &r : servant_roots_) {
      auto it = m.find(r);
      if (it != m.end() && it->second &&
          std::find(master_roots_.begin(), master_roots_.end(), *it->second) != master_roots_.end())
        ++roots;
    }
    if (found_ && std::pair(strong, roots) <= std::pair(best_strong_, best_roots_)) return;
    found_ = true;
    best_strong_ = strong;
    best_roots_ = roots;
    best_assign_ = assign_;
    best_kinds_ = kinds_;
    best_mapping_ = m;
    done_ = strong == static_cast<int>(m_.size()) &&
            roots == static_cast<int>(std::min(servant_roots_.size(), master_roots_.size()));
  }

  const std::vector<Production> &s_;
  const std::vector<Production> &m_;
  const std::vector<std::string> &servant_roots_;
  const std::vector<std::string> &master_roots_;
  std::vector<int> assign_;
  std::vector<MatchKind> kinds_;
  std::vector<bool> used_;

  bool found_ = false;
  bool done_ = false;
  int best_strong_ = 0;
  int best_roots_ = 0;
  std::vector<int> best_assign_;
  std::vector<MatchKind> best_kinds_;
  PartialMapping best_mapping_;
};

}  // namespace

GrammarMatch match_grammars(const Grammar &servant, const Grammar &master) {
  return GrammarSearch(servant, master).run();
}

}  // namespace gramconv
