#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gramconv/grammar.hpp"
#include "gramconv/prodsig.hpp"

namespace testsupport {

/// Expected outcome for one source, read from tests/golden/<name>.txt.
struct Golden {
  std::vector<gramconv::Production> anf;
  std::vector<std::set<gramconv::SigEntry>> signatures;  // parallel to `anf`
  std::set<std::pair<std::string, gramconv::Target>> mapping;
  std::multiset<std::string> structural;  // step families
};

extern const std::vector<std::string> kSources;

Golden load_golden(const std::string &name);
gramconv::Grammar load_fixture(const std::string &name);

/// Pattern chars reordered as 1 < + < * < ?.
std::string sorted_pattern(std::string p);
std::set<gramconv::SigEntry> as_set(const gramconv::Signature &s);

}  // namespace testsupport
