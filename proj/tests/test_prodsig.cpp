#include <doctest.h>

#include "gramconv/anf.hpp"
#include "gramconv/bgf_text.hpp"
#include "gramconv/converge.hpp"
#include "gramconv/prodsig.hpp"
#include "support/golden.hpp"
#include "support/oracle.hpp"
#include "support/random_grammar.hpp"

using namespace gramconv;
using namespace testsupport;

namespace {
Production P(const char *text) { return parse_bgf(text).productions.at(0); }
}  // namespace

TEST_CASE("signatures group marks per nonterminal") {
  Signature s = production_signature(P("f : ID ID+ expr NEWLINE+ ;"));
  CHECK(format_signature(s) == "{⟨ID, 1+⟩, ⟨NEWLINE, +⟩, ⟨expr, 1⟩}");
  CHECK(format_signature(production_signature(P("f : a? a* a a+ ;"))) == "{⟨a, 1+*?⟩}");
  CHECK_THROWS_AS(production_signature(P("f : \"x\" ;")), MatchError);
}

TEST_CASE("signatures of every ANF production match the expected tables") {
  Grammar master = load_fixture("master");
  for (const auto &name : kSources) {
    Golden gold = load_golden(name);
    for (size_t i = 0; i < gold.anf.size(); ++i)
      CHECK_MESSAGE(as_set(production_signature(gold.anf[i])) == gold.signatures[i], name);
  }
}

TEST_CASE("strong and weak matching") {
  PartialMapping none;
  CHECK(strong_match(P("e : a o a ;"), P("b : x y x ;"), none));
  CHECK_FALSE(strong_match(P("e : a o a ;"), P("b : x x y ;"), none));
  auto weak = weak_match(P("f : a a+ e n+ ;"), P("g : s s+ x ;"), none);
  REQUIRE(weak);
  CHECK_FALSE(weak->strong);
  CHECK(weak->evidence.front().kind == Evidence::Kind::Omitted);
  auto wide = weak_match(P("f : a* ;"), P("g : b+ ;"), none);
  REQUIRE(wide);
  CHECK(wide->evidence.front().kind == Evidence::Kind::Multiplicity);
  CHECK_FALSE(weak_match(P("f : a+ ;"), P("g : b* ;"), none));
  PartialMapping fixed{{"a", Target{"z"}}};
  CHECK_FALSE(strong_match(P("e : a ;"), P("b : x ;"), fixed));
}

TEST_CASE("alignments bind names injectively") {
  auto all = alignments(P("f : a b ;"), P("g : x x ;"), {});
  CHECK(all.empty());
  all = alignments(P("f : a b ;"), P("g : x y ;"), {});
  REQUIRE(all.size() == 2);
  CHECK(all.front().kind.strong);
  CHECK_FALSE(all.back().kind.strong);
}

TEST_CASE("grammar matching reproduces the expected mappings") {
  Grammar master = load_fixture("master");
  for (const auto &name : kSources) {
    Golden gold = load_golden(name);
    Grammar anf = normalize(trigger_mutations(load_fixture(name), master).first).grammar;
    GrammarMatch gm = match_grammars(anf, master);
    std::set<std::pair<std::string, Target>> got(gm.mapping.pairs.begin(), gm.mapping.pairs.end());
    CHECK_MESSAGE(got == gold.mapping, name);
    CHECK_MESSAGE(check_matching(anf, master, gm) == "", name);
  }
}

TEST_CASE("matching agrees with the brute-force oracle") {
  Grammar master = load_fixture("master");
  for (const auto &name : kSources) {
    Grammar anf = normalize(trigger_mutations(load_fixture(name), master).first).grammar;
    auto best = oracle_best_strong(anf, master);
    REQUIRE(best);
    CHECK_MESSAGE(match_grammars(anf, master).strong_count == *best, name);
  }
  for (uint32_t seed = 1; seed <= 100; ++seed) {
    auto [servant, m] = random_servant_master(seed);
    auto best = oracle_best_strong(servant, m);
    try {
      GrammarMatch gm = match_grammars(servant, m);
      CHECK_MESSAGE(best, "seed " << seed);
      if (best) CHECK_MESSAGE(gm.strong_count == *best, "seed " << seed);
      CHECK_MESSAGE(check_matching(servant, m, gm) == "", "seed " << seed);
    } catch (const MatchError &e) {
      CHECK(e.kind() == MatchError::Kind::NoCompleteMatch);
      CHECK_MESSAGE(!best, "seed " << seed);
    }
  }
}
