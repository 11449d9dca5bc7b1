#pragma once

#include <compare>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace gramconv {

/// Constructor tag of an expression node.
enum class Kind {
  Epsilon,
  Empty,
  Terminal,
  Nonterminal,
  Sequence,
  Choice,
  Star,
  Plus,
  Optional,
  Selector,
  SeparatedPlus,
};

/// Lowercase tag used by the JSON export (`"sequence"`, `"separated_plus"`, ...).
const char *kind_name(Kind k);

/// Immutable right-hand-side expression.
///
/// Terminal and Nonterminal keep their text in `text()`. Selector keeps its
/// name in `text()` and the selected item as the only child. Star, Plus and
/// Optional have exactly one child; SeparatedPlus has the item and the
/// separator, in that order.
class Expr {
 public:
  Expr() = default;

  static Expr epsilon();
  static Expr empty();
  static Expr terminal(std::string text);
  static Expr nonterminal(std::string name);
  static Expr sequence(std::vector<Expr> parts);
  static Expr choice(std::vector<Expr> alts);
  static Expr star(Expr inner);
  static Expr plus(Expr inner);
  static Expr optional(Expr inner);
  static Expr selector(std::string name, Expr inner);
  static Expr separated_plus(Expr item, Expr separator);

  Kind kind() const { return kind_; }
  const std::string &text() const { return text_; }
  const std::vector<Expr> &children() const { return kids_; }
  const Expr &inner() const { return kids_.front(); }

  bool is(Kind k) const { return kind_ == k; }
  bool is_nonterminal(const std::string &name) const {
    return kind_ == Kind::Nonterminal && text_ == name;
  }
  /// Star, Plus or Optional.
  bool is_iteration() const;

  /// Copy with the children replaced; kind and text are kept.
  Expr with_children(std::vector<Expr> kids) const;

  friend bool operator==(const Expr &a, const Expr &b);
  friend std::strong_ordering operator<=>(const Expr &a, const Expr &b);

 private:
  Expr(Kind k, std::string text, std::vector<Expr> kids);

  Kind kind_ = Kind::Epsilon;
  std::string text_;
  std::vector<Expr> kids_;
};

/// Labeled production `p(label, lhs, rhs)`; an empty label means unlabeled.
struct Production {
  std::string label;
  std::string lhs;
  Expr rhs;

  friend bool operator==(const Production &, const Production &) = default;
  friend std::strong_ordering operator<=>(const Production &a, const Production &b);
};

struct Grammar {
  std::vector<std::string> roots;
  std::vector<Production> productions;

  /// Productions whose lhs is `nt`, in list order.
  std::vector<Production> definitions(const std::string &nt) const;
  bool defines(const std::string &nt) const;
};

/// Result of `usage`; `top` is `defined` minus `used`.
struct Usage {
  std::set<std::string> defined;
  std::set<std::string> used;
  std::set<std::string> top;
};

Usage usage(const Grammar &g);

/// Roots equal as sets and productions equal as multisets.
bool canonical_eq(const Grammar &a, const Grammar &b);

/// Throws `std::invalid_argument` when a structural invariant is broken:
/// short sequences or choices, empty names, duplicate labels per lhs.
void validate(const Grammar &g);
void validate(const Expr &e);

/// Pre-order visit of every node.
void visit(const Expr &e, const std::function<void(const Expr &)> &fn);

/// Bottom-up rebuild: children first, then `fn` on the rebuilt node.
Expr rewrite(const Expr &e, const std::function<Expr(const Expr &)> &fn);

/// Nonterminal names referenced in `e`, in first-occurrence order.
std::vector<std::string> referenced(const Expr &e);

/// Number of nonterminal occurrences of `name` across all right-hand sides.
int use_count(const Grammar &g, const std::string &name);

/// Every name that is defined, used, or listed as a root.
std::set<std::string> all_names(const Grammar &g);

/// Rename every nonterminal occurrence of `from` in `e` to `to`.
Expr rename_nonterminal(const Expr &e, const std::string &from, const std::string &to);

/// Replace every occurrence of subterm `pattern` by `with`, outermost first.
/// Returns the number of replacements through `count` when non-null.
Expr replace_subterm(const Expr &e, const Expr &pattern, const Expr &with, int *count = nullptr);

/// Number of (possibly nested) occurrences of `pattern` inside `e`.
int count_subterm(const Expr &e, const Expr &pattern);

}  // namespace gramconv
