#pragma once

#include <cstdint>
#include <utility>

#include "gramconv/grammar.hpp"

namespace testsupport {

/// Random ANF grammar over at most 8 nonterminals.
gramconv::Grammar random_anf(uint32_t seed);

/// A random ANF master with a servant derived from it: renamed, then
/// perturbed by reordering, widening, extra elements or extra productions.
/// Roughly one seed in five yields an unrelated servant instead.
std::pair<gramconv::Grammar, gramconv::Grammar> random_servant_master(uint32_t seed);

/// Random BGF grammar with labels, selectors, terminals, choices and
/// iterations, for normalizer properties. Alternatives of a nonterminal
/// with several productions always mention some nonterminal.
gramconv::Grammar random_bgf(uint32_t seed);

}  // namespace testsupport
