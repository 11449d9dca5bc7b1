#pragma once

#include <optional>

#include "gramconv/grammar.hpp"
#include "gramconv/prodsig.hpp"

namespace testsupport {

/// Exhaustive search over injective assignments of master productions to
/// servant productions, with element-level position bijections and a
/// global injective name mapping (ω allowed for dropped servant names).
/// Returns the largest strong count over complete matchings, or nullopt
/// when no complete matching exists.
std::optional<int> oracle_best_strong(const gramconv::Grammar &servant,
                                      const gramconv::Grammar &master);

/// Checks that `m` is a complete, consistent matching whose strong count is
/// what its pairs claim. Returns an empty string when valid.
std::string check_matching(const gramconv::Grammar &servant, const gramconv::Grammar &master,
                           const gramconv::GrammarMatch &m);

}  // namespace testsupport
