#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gramconv/grammar.hpp"

namespace gramconv {

enum class XbgfFailure {
  TargetNotFound,
  AmbiguousTarget,
  PreconditionViolated,
  NameClash,
  MissingPayload,
};

const char *failure_name(XbgfFailure f);

class XbgfError : public std::runtime_error {
 public:
  XbgfError(XbgfFailure kind, const std::string &detail);
  XbgfFailure kind() const { return kind_; }

 private:
  XbgfFailure kind_;
};

namespace step {

// Optional members are inversion payloads filled in by apply_step.

struct RenameN {
  std::string from, to;
};
struct Reroot {
  std::vector<std::string> to;
  std::optional<std::vector<std::string>> from;
};
struct Unlabel {
  Production target;
};
struct Designate {
  Production target;
  std::string label;
  bool selector = false;
};
struct Anonymize {
  Production target;
  std::optional<Production> result;
};
struct Deanonymize {
  Production target;
  Production restored;
};
struct Abstractize {
  Production target;
  std::optional<Production> result;
};
struct Concretize {
  Production target;
  Production restored;
};
struct Massage {
  Production target;
  Production result;
};
struct Vertical {
  std::string nt;
  std::optional<std::vector<Production>> original;
};
struct Horizontal {
  std::string nt;
  std::optional<std::vector<Production>> restore;
};
struct Undefine {
  std::string nt;
  std::optional<std::vector<Production>> saved;
};
struct Define {
  std::vector<Production> productions;
};
struct Eliminate {
  std::string nt;
  std::optional<std::vector<Production>> saved;
};
struct Introduce {
  std::vector<Production> productions;
};
struct Unchain {
  Production chain;
  std::optional<Production> definition;
};
struct Chain {
  Production target;
  std::optional<Production> chain;
  std::optional<Production> definition;
};
struct Abridge {
  Production target;
};
struct Detour {
  Production target;
};

/// A production before and after a use-site rewrite.
struct Site {
  Production before, after;
  friend bool operator==(const Site &, const Site &) = default;
};

struct Extract {
  Production definition;
  std::string scope;
  std::optional<std::vector<Site>> sites;
};
struct Inline {
  std::string nt;
  std::optional<Production> definition;
  std::optional<std::vector<Site>> sites;
};
struct Project {
  Production target;
  std::vector<size_t> positions;  // 0-based
  std::optional<std::vector<std::pair<size_t, Expr>>> removed;
};
struct Inject {
  Production target;
  std::vector<std::pair<size_t, Expr>> insertions;
  std::optional<size_t> kept;  // sequence length before insertion
};
struct Narrow {
  std::string scope;
  Expr from, to;
};
struct Widen {
  std::string scope;
  Expr from, to;
};
struct Permute {
  Production target;
  std::vector<size_t> order;  // new[i] = old[order[i]], 0-based
};
struct Unite {
  std::string from, into;
  std::optional<std::vector<Site>> sites;
  std::optional<std::vector<std::string>> roots;
};
struct SplitN {
  std::string from, into;
  std::vector<Site> sites;
  std::vector<std::string> roots;
};
struct AssocIterate {
  Production target;
  std::optional<Production> result;
};
struct Iterate {
  Production target;
  Production restored;
};

}  // namespace step

using Step = std::variant<step::RenameN, step::Reroot, step::Unlabel, step::Designate,
                          step::Anonymize, step::Deanonymize, step::Abstractize,
                          step::Concretize, step::Massage, step::Vertical, step::Horizontal,
                          step::Undefine, step::Define, step::Eliminate, step::Introduce,
                          step::Unchain, step::Chain, step::Abridge, step::Detour, step::Extract,
                          step::Inline, step::Project, step::Inject, step::Narrow, step::Widen,
                          step::Permute, step::Unite, step::SplitN, step::AssocIterate,
                          step::Iterate>;

using Script = std::vector<Step>;

/// Operator name as written in scripts, e.g. "unchain".
std::string step_name(const Step &s);
/// Bidirectional pair name, e.g. "unchain-chain" or "narrow-widen".
std::string step_family(const Step &s);

struct Applied {
  Grammar grammar;
  Step step;  // the input step with its inversion payload populated
};

Applied apply_step(const Grammar &g, const Step &s);
Step invert_step(const Step &s);

class ScriptError : public std::runtime_error {
 public:
  ScriptError(size_t index, Grammar intermediate, const XbgfError &cause);
  size_t index() const { return index_; }
  const Grammar &intermediate() const { return intermediate_; }
  XbgfFailure kind() const { return kind_; }

 private:
  size_t index_;
  Grammar intermediate_;
  XbgfFailure kind_;
};

/// Left fold of apply_step. `applied`, when given, receives the steps with
/// payloads. Failures are rethrown as ScriptError carrying the step index.
Grammar apply_script(const Grammar &g, const Script &sc, Script *applied = nullptr);

/// Reverse order, each step inverted. Requires populated payloads.
Script invert_script(const Script &sc);

// Rewrites shared with the normalizer.

/// Drop ε per the absorption rules; a choice mixing ε with two or more other
/// alternatives is rejected with PreconditionViolated.
Expr absorb_epsilon(const Expr &e);
/// Remove every selector below the top level, then absorb ε.
Expr anonymized(const Expr &e);
/// Replace terminals by ε, then absorb ε.
Expr abstracted(const Expr &e);
/// `{x s}+` becomes `x (s x)*`, spliced into an enclosing sequence.
Expr desugared(const Expr &e);
/// `X (O X)*` or `(X O)* X` to `X O X`; nullopt when the shape does not fit.
std::optional<Expr> assoc_form(const Expr &e);

}  // namespace gramconv
