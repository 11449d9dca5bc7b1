#pragma once

#include <json.hpp>

#include "gramconv/grammar.hpp"

namespace gramconv {

/// `{"kind": "sequence", "parts": [...]}` and friends.
nlohmann::json expr_to_json(const Expr &e);
/// `{"roots": [...], "productions": [{"label", "lhs", "rhs"}]}`.
nlohmann::json grammar_to_json(const Grammar &g);
nlohmann::json production_to_json(const Production &p);

/// Inverse of the above. Throws std::invalid_argument on unknown kinds,
/// missing fields, and sequences or choices with fewer than two children.
Expr expr_from_json(const nlohmann::json &j);
Grammar grammar_from_json(const nlohmann::json &j);

}  // namespace gramconv
