#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "gramconv/anf.hpp"
#include "gramconv/grammar.hpp"
#include "gramconv/prodsig.hpp"
#include "gramconv/xbgf.hpp"

namespace gramconv {

/// Failure of one convergence phase. `phase()` is one of mutate, normalize,
/// match, rename, structural, verify.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(std::string phase, const std::string &detail)
      : std::runtime_error(detail), phase_(std::move(phase)) {}
  const std::string &phase() const { return phase_; }

 private:
  std::string phase_;
};

struct ConvergenceResult {
  Grammar servant;
  Script mutations;
  Grammar mutated;
  Script normalization;
  Grammar anf;
  GrammarMatch match;
  Script renames;
  Script structural;
  Grammar final;

  /// mutations, normalization, renames and structural steps in order.
  Script full_script() const;
};

/// Unite bracketed layers, then collapse `X (O X)*` iterations; both to fixpoint.
std::pair<Grammar, Script> trigger_mutations(const Grammar &servant, const Grammar &master);

/// One RenameN per mapped pair with a different, non-ω target, in mapping
/// order. A target name still in use by a symbol that is renamed later is
/// first moved to a fresh temporary name.
Script nominal_resolution(const NominalMapping &mapping, const Grammar &servant);

/// Reroot, projections, eliminations, narrows and permutes that turn the
/// renamed servant into the master. Throws ConvergenceError.
Script structural_resolution(const Grammar &renamed, const Grammar &master,
                             const GrammarMatch &match);

ConvergenceResult converge(const Grammar &servant, const Grammar &master);

/// True iff the script applies cleanly and yields the master. `why` receives
/// a diagnostic on failure.
bool verify(const Grammar &servant, const Script &script, const Grammar &master,
            std::string *why = nullptr);

}  // namespace gramconv
