#include <doctest.h>

#include "gramconv/bgf_text.hpp"
#include "gramconv/converge.hpp"
#include "support/golden.hpp"

using namespace gramconv;
using namespace testsupport;

namespace {
std::multiset<std::string> families(const Script &sc) {
  std::multiset<std::string> out;
  for (const auto &s : sc) out.insert(step_family(s));
  return out;
}
}  // namespace

TEST_CASE("structural scripts match the expected step families") {
  Grammar master = load_fixture("master");
  for (const auto &name : kSources) {
    ConvergenceResult r = converge(load_fixture(name), master);
    CHECK_MESSAGE(families(r.structural) == load_golden(name).structural, name);
  }
}

TEST_CASE("every source converges and verifies") {
  Grammar master = load_fixture("master");
  for (const auto &name : kSources) {
    Grammar servant = load_fixture(name);
    ConvergenceResult r = converge(servant, master);
    std::string why;
    CHECK_MESSAGE(verify(servant, r.full_script(), master, &why), name << ": " << why);
    CHECK(canonical_eq(r.final, master));
  }
}

TEST_CASE("the master converges to itself with nothing to do") {
  Grammar master = load_fixture("master");
  ConvergenceResult r = converge(master, master);
  CHECK(r.mutations.empty());
  CHECK(r.normalization.empty());
  CHECK(r.renames.empty());
  CHECK(r.structural.empty());
  CHECK(verify(master, r.full_script(), master));
}

TEST_CASE("mutations unite bracket layers and collapse iterations") {
  Grammar g = parse_bgf(R"bgf(
    roots: e ;
    e : t ("+" t)* ;
    t : a ;
    t : "(" e ")" ;
  )bgf");
  auto [out, steps] = trigger_mutations(g, Grammar{});
  CHECK_FALSE(out.defines("t"));
  bool collapsed = false;
  for (const auto &s : steps) collapsed = collapsed || step_family(s) == "assoc-iterate";
  CHECK(collapsed);
  CHECK(canonical_eq(apply_script(g, steps), out));
}

TEST_CASE("nominal resolution skips identity and ω pairs") {
  NominalMapping m{{{"a", Target{"a"}}, {"b", Target{}}, {"c", Target{"d"}}}};
  Script sc = nominal_resolution(m, parse_bgf("roots: a ; a : b c ;"));
  REQUIRE(sc.size() == 1);
  CHECK(std::get<step::RenameN>(sc[0]).to == "d");
}

TEST_CASE("nominal resolution moves a blocking name out of the way") {
  NominalMapping m{{{"a", Target{"b"}}, {"b", Target{"c"}}}};
  Grammar g = parse_bgf("roots: a ; a : b ; b : x ;");
  Script sc = nominal_resolution(m, g);
  REQUIRE(sc.size() == 3);
  CHECK(canonical_eq(apply_script(g, sc), parse_bgf("roots: b ; b : c ; c : x ;")));
}

TEST_CASE("nominal resolution reports an unresolvable clash") {
  NominalMapping m{{{"a", Target{"b"}}}};
  CHECK_THROWS_AS(nominal_resolution(m, parse_bgf("roots: a ; a : b ; b : x ;")), ConvergenceError);
}

TEST_CASE("convergence failures name their phase") {
  Grammar master = load_fixture("master");
  try {
    converge(parse_bgf("roots: a ; a : b ;"), master);
    FAIL("expected failure");
  } catch (const ConvergenceError &e) {
    CHECK(e.phase() == "match");
  }
}

TEST_CASE("every applied step inverts cleanly") {
  Grammar master = load_fixture("master");
  int checked = 0;
  for (const auto &name : kSources) {
    Grammar g = load_fixture(name);
    for (const auto &s : converge(g, master).full_script()) {
      Applied fwd = apply_step(g, s);
      Grammar back = apply_step(fwd.grammar, invert_step(fwd.step)).grammar;
      CHECK_MESSAGE(canonical_eq(back, g), name << " " << step_name(s));
      CHECK(canonical_eq(apply_step(back, fwd.step).grammar, fwd.grammar));
      g = fwd.grammar;
      ++checked;
    }
  }
  CHECK(checked > 200);
}
