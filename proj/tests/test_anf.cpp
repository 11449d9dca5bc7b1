#include <doctest.h>

#include "gramconv/anf.hpp"
#include "gramconv/bgf_text.hpp"
#include "gramconv/converge.hpp"
#include "gramconv/notation.hpp"
#include "support/golden.hpp"
#include "support/random_grammar.hpp"

using namespace gramconv;
using namespace testsupport;

TEST_CASE("ANF of every source matches the expected production set") {
  Grammar master = load_fixture("master");
  for (const auto &name : kSources) {
    Golden gold = load_golden(name);
    Grammar mutated = trigger_mutations(load_fixture(name), master).first;
    AnfGrammar anf = normalize(mutated);
    Grammar want;
    want.productions = gold.anf;
    want.roots = anf.grammar.roots;
    CHECK_MESSAGE(canonical_eq(anf.grammar, want), name << "\n" << serialize_bgf(anf.grammar));
    CHECK(canonical_eq(apply_script(mutated, anf.trace), anf.grammar));
  }
}

TEST_CASE("normalization keeps an ANF grammar as is") {
  Grammar master = load_fixture("master");
  AnfGrammar anf = normalize(master);
  CHECK(anf.trace.empty());
  CHECK(anf.grammar.productions == master.productions);
}

TEST_CASE("is_anf") {
  CHECK(is_anf(parse_bgf("roots: a ; a : b c+ d* e? ; b : x ; b : y ;")));
  CHECK_FALSE(is_anf(parse_bgf("a : \"t\" b ;")));
  CHECK_FALSE(is_anf(parse_bgf("[l] a : b ;")));
  CHECK_FALSE(is_anf(parse_bgf("a : b | c ;")));
  CHECK_FALSE(is_anf(parse_bgf("a : b ; a : c d ;")));
  CHECK_FALSE(is_anf(parse_bgf("a : (b c)* ;")));
}

TEST_CASE("roots are detected from top symbols when missing") {
  Grammar g = parse_bgf("f : a b ; a : \"x\" ; b : a ;");
  CHECK(detect_roots(g) == std::vector<std::string>{"f"});
  CHECK(normalize(g).grammar.roots == std::vector<std::string>{"f"});
}

TEST_CASE("nested structure is extracted into fresh names") {
  Grammar g = parse_bgf("roots: e ; [b] e : e \"+\" e ; [a] e : x (y z)+ ;");
  AnfGrammar anf = normalize(g);
  CHECK(is_anf(anf.grammar));
  CHECK(anf.grammar.defines("e_1"));
}

TEST_CASE("normalize is idempotent on sources and random grammars") {
  Grammar master = load_fixture("master");
  for (const auto &name : kSources) {
    AnfGrammar once = normalize(trigger_mutations(load_fixture(name), master).first);
    AnfGrammar twice = normalize(once.grammar);
    CHECK(twice.trace.empty());
    CHECK(canonical_eq(twice.grammar, once.grammar));
  }
  int unsupported = 0;
  for (uint32_t seed = 1; seed <= 100; ++seed) {
    Grammar g = random_bgf(seed);
    AnfGrammar once;
    try {
      once = normalize(g);
    } catch (const NormalizationError &e) {
      ++unsupported;
      continue;
    }
    CHECK(is_anf(once.grammar));
    CHECK(canonical_eq(apply_script(g, once.trace), once.grammar));
    AnfGrammar twice = normalize(once.grammar);
    CHECK_MESSAGE(twice.trace.empty(), "seed " << seed);
    CHECK(canonical_eq(twice.grammar, once.grammar));
  }
  CHECK(unsupported == 0);
}
