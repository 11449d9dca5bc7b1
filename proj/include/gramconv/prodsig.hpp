#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gramconv/grammar.hpp"

namespace gramconv {

class MatchError : public std::runtime_error {
 public:
  enum class Kind { NotAnf, NoCompleteMatch };
  MatchError(Kind kind, const std::string &msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// One ⟨nonterminal, pattern⟩ pair. Patterns are sorted over 1 < + < * < ?.
struct SigEntry {
  std::string nt;
  std::string pattern;
  friend bool operator==(const SigEntry &, const SigEntry &) = default;
  friend auto operator<=>(const SigEntry &, const SigEntry &) = default;
};

/// Entries sorted by nonterminal name, one per name.
using Signature = std::vector<SigEntry>;

/// Throws MatchError(NotAnf) unless the rhs has ANF shape.
Signature production_signature(const Production &p);
/// `{⟨expr, 1⟩, ⟨ID, 1+⟩}`
std::string format_signature(const Signature &s);

/// Servant name to master name; nullopt stands for ω.
using Target = std::optional<std::string>;
using PartialMapping = std::map<std::string, Target>;

/// Ordered servant-to-master pairs.
struct NominalMapping {
  std::vector<std::pair<std::string, Target>> pairs;
  Target lookup(const std::string &servant) const;
  bool contains(const std::string &servant) const;
};

struct Evidence {
  enum class Kind { Omitted, Multiplicity, Order };
  Kind kind;
  std::string servant;  // Omitted: the dropped name; Multiplicity: servant name
  std::string master;   // Multiplicity: master name
  std::string servant_pattern, master_pattern;
  friend bool operator==(const Evidence &, const Evidence &) = default;
};

struct MatchKind {
  bool strong = true;
  std::vector<Evidence> evidence;  // empty when strong
};

/// Positional skeleton equality consistent with (and extending) `m`.
bool strong_match(const Production &servant, const Production &master, const PartialMapping &m);

/// One way to match a servant production against a master production.
struct Alignment {
  MatchKind kind;
  PartialMapping extension;  // `m` plus the pairs this match implies
};

/// Every cover of the master signature by servant entries consistent with
/// `m`. Strong alignments come first. Empty when the productions cannot match.
std::vector<Alignment> alignments(const Production &servant, const Production &master,
                                  const PartialMapping &m);

/// First alignment, if any.
std::optional<MatchKind> weak_match(const Production &servant, const Production &master,
                                    const PartialMapping &m);

struct MatchedPair {
  Production servant;
  std::optional<Production> master;  // nullopt: no counterpart
  std::optional<MatchKind> kind;
};

struct GrammarMatch {
  std::vector<MatchedPair> pairs;  // servant production order
  NominalMapping mapping;          // names of matched servant productions
  int strong_count = 0;
};

/// Complete matching of every master production to a distinct servant
/// production, maximizing the number of strong matches, then the number of
/// servant roots mapped onto master roots. Ties go to master order, then
/// servant order. Throws MatchError(NoCompleteMatch).
GrammarMatch match_grammars(const Grammar &servant, const Grammar &master);

}  // namespace gramconv
