#pragma once

#include <string>

#include "gramconv/converge.hpp"

namespace gramconv {

struct ReportOptions {
  /// Also list identity pairs (e.g. int to int) among the renames.
  bool noop_renames = false;
};

/// Markdown document with the sections Source grammar, Mutations,
/// Normalizations, Grammar in ANF, Nominal resolution and Structural
/// resolution. Empty Mutations and Structural sections are left out.
std::string generate_report(const ConvergenceResult &result, const std::string &source_name,
                            const ReportOptions &options = {});

/// `**unchain-chain** p('', expr, binary)` style line body for one step.
std::string report_step(const Step &s);

}  // namespace gramconv
