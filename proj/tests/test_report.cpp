#include <doctest.h>

#include "gramconv/converge.hpp"
#include "gramconv/report.hpp"
#include "support/golden.hpp"

using namespace gramconv;
using namespace testsupport;

namespace {
bool has(const std::string &text, const std::string &part) { return text.find(part) != std::string::npos; }
}  // namespace

TEST_CASE("report sections and tables") {
  Grammar master = load_fixture("master");
  ConvergenceResult r = converge(load_fixture("antlr"), master);
  std::string md = generate_report(r, "antlr");
  CHECK(md.rfind("# antlr\n", 0) == 0);
  CHECK(has(md, "## Source grammar"));
  CHECK(has(md, "## Mutations"));
  CHECK(has(md, "## Normalizations"));
  CHECK(has(md, "## Grammar in ANF"));
  CHECK(has(md, "## Nominal resolution"));
  CHECK(has(md, "## Structural resolution"));
  CHECK(has(md, "| `p('', function, seq([ID, +(ID), expr, +(NEWLINE)]))` | `{⟨ID, 1+⟩, ⟨NEWLINE, +⟩, ⟨expr, 1⟩}` |"));
  CHECK(has(md, "- ⟨NEWLINE, ω⟩"));
  CHECK(has(md, "**renameN-renameN** `expr` to `expression`"));
  CHECK(has(md, "**project-inject**"));
}

TEST_CASE("empty sections are left out") {
  Grammar master = load_fixture("master");
  std::string md = generate_report(converge(load_fixture("rascal-c"), master), "rascal-c");
  CHECK_FALSE(has(md, "## Mutations"));
  CHECK_FALSE(has(md, "## Structural resolution"));
}

TEST_CASE("identity renames are listed on request") {
  Grammar master = load_fixture("master");
  ConvergenceResult r = converge(load_fixture("dcg"), master);
  CHECK_FALSE(has(generate_report(r, "dcg"), "`int` to `int`"));
  CHECK(has(generate_report(r, "dcg", {true}), "`int` to `int`"));
}

TEST_CASE("reports are deterministic") {
  Grammar master = load_fixture("master");
  for (const auto &name : kSources) {
    std::string a = generate_report(converge(load_fixture(name), master), name);
    std::string b = generate_report(converge(load_fixture(name), master), name);
    CHECK(a == b);
  }
}
