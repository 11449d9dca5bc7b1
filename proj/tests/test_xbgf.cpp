#include <doctest.h>

#include "gramconv/bgf_text.hpp"
#include "gramconv/converge.hpp"
#include "gramconv/script_text.hpp"
#include "gramconv/xbgf.hpp"
#include "support/golden.hpp"

using namespace gramconv;

namespace {

Grammar G(const char *text) { return parse_bgf(text); }
Production P(const char *text) { return parse_bgf(text).productions.at(0); }

// apply, invert, apply again; returns the forward result.
Grammar round_trip(const Grammar &g, const Step &s) {
  Applied fwd = apply_step(g, s);
  Applied back = apply_step(fwd.grammar, invert_step(fwd.step));
  CHECK_MESSAGE(canonical_eq(back.grammar, g), step_name(s));
  Applied again = apply_step(back.grammar, invert_step(back.step));
  CHECK(canonical_eq(again.grammar, fwd.grammar));
  return fwd.grammar;
}

XbgfFailure failure_of(const Grammar &g, const Step &s) {
  try {
    apply_step(g, s);
  } catch (const XbgfError &e) {
    return e.kind();
  }
  FAIL("step was expected to fail");
  return XbgfFailure::MissingPayload;
}

}  // namespace

TEST_CASE("renameN renames everywhere and refuses clashes") {
  Grammar g = G("roots: a ; a : b c ; b : c ;");
  Grammar out = round_trip(g, step::RenameN{"b", "x"});
  CHECK(canonical_eq(out, G("roots: a ; a : x c ; x : c ;")));
  CHECK(failure_of(g, step::RenameN{"b", "c"}) == XbgfFailure::NameClash);
  CHECK(failure_of(g, step::RenameN{"zz", "y"}) == XbgfFailure::TargetNotFound);
}

TEST_CASE("reroot, label and selector operators") {
  Grammar g = G("roots: a ; [l] a : b::x c ; x : c ;");
  CHECK(round_trip(g, step::Reroot{{"x"}, std::nullopt}).roots == std::vector<std::string>{"x"});
  Grammar u = round_trip(g, step::Unlabel{P("[l] a : b::x c ;")});
  CHECK(u.productions[0].label.empty());
  Grammar d = round_trip(u, step::Designate{P("a : b::x c ;"), "m", false});
  CHECK(d.productions[0].label == "m");
  Grammar an = round_trip(g, step::Anonymize{P("[l] a : b::x c ;"), std::nullopt});
  CHECK(an.productions[0].rhs == parse_rhs("x c"));
  CHECK(failure_of(g, step::Unlabel{P("a : q ;")}) == XbgfFailure::TargetNotFound);
}

TEST_CASE("abstractize drops terminals and concretize restores them") {
  Grammar g = G("roots: f ; f : \"(\" a \")\" b ;");
  Grammar out = round_trip(g, step::Abstractize{P("f : \"(\" a \")\" b ;"), std::nullopt});
  CHECK(out.productions[0].rhs == parse_rhs("a b"));
}

TEST_CASE("vertical splits a choice, horizontal joins it back") {
  Grammar g = G("roots: e ; e : a | b | c ;");
  Grammar out = round_trip(g, step::Vertical{"e", std::nullopt});
  CHECK(out.productions.size() == 3);
  Grammar back = round_trip(out, step::Horizontal{"e", std::nullopt});
  CHECK(back.productions.size() == 1);
}

TEST_CASE("chain, unchain, abridge and detour") {
  Grammar g = G("roots: e ; e : b ; b : x y ;");
  Grammar inl = round_trip(g, step::Unchain{P("e : b ;"), std::nullopt});
  CHECK(canonical_eq(inl, G("roots: e ; [b] e : x y ;")));
  Grammar loop = G("roots: e ; e : e ; e : x ;");
  CHECK(round_trip(loop, step::Abridge{P("e : e ;")}).productions.size() == 1);
}

TEST_CASE("extract and inline") {
  Grammar g = G("roots: f ; f : c (a b)+ ; g : (a b)+ ;");
  Grammar out = round_trip(g, step::Extract{P("ab : a b ;"), "f", std::nullopt});
  CHECK(canonical_eq(out, G("roots: f ; f : c ab+ ; g : (a b)+ ; ab : a b ;")));
  Grammar back = round_trip(out, step::Inline{"ab", std::nullopt, std::nullopt});
  CHECK(canonical_eq(back, g));
}

TEST_CASE("project, inject and permute") {
  Grammar g = G("roots: f ; f : a b c ;");
  Grammar pr = round_trip(g, step::Project{P("f : a b c ;"), {1}, std::nullopt});
  CHECK(pr.productions[0].rhs == parse_rhs("a c"));
  Grammar in = round_trip(pr, step::Inject{P("f : a c ;"), {{1, Expr::nonterminal("b")}}, std::nullopt});
  CHECK(canonical_eq(in, g));
  Grammar pe = round_trip(g, step::Permute{P("f : a b c ;"), {2, 0, 1}});
  CHECK(pe.productions[0].rhs == parse_rhs("c a b"));
  CHECK(failure_of(g, step::Permute{P("f : a b c ;"), {0, 0, 1}}) ==
        XbgfFailure::PreconditionViolated);
}

TEST_CASE("narrow and widen") {
  Grammar g = G("roots: f ; f : a* b? ;");
  Grammar n = round_trip(g, step::Narrow{"f", parse_rhs("a*"), parse_rhs("a+")});
  CHECK(n.productions[0].rhs == parse_rhs("a+ b?"));
  n = round_trip(n, step::Narrow{"f", parse_rhs("b?"), parse_rhs("b")});
  CHECK(n.productions[0].rhs == parse_rhs("a+ b"));
  CHECK(failure_of(g, step::Narrow{"f", parse_rhs("a*"), parse_rhs("a?")}) ==
        XbgfFailure::PreconditionViolated);
}

TEST_CASE("eliminate and introduce") {
  Grammar g = G("roots: f ; f : a ; x : y ;");
  Grammar out = round_trip(g, step::Eliminate{"x", std::nullopt});
  CHECK_FALSE(out.defines("x"));
  CHECK(failure_of(g, step::Eliminate{"a", std::nullopt}) == XbgfFailure::TargetNotFound);
}

TEST_CASE("unite merges one nonterminal into another") {
  Grammar g = G("roots: e ; e : a ; e : \"(\" t \")\" ; t : e ;");
  Grammar out = round_trip(g, step::Unite{"t", "e", std::nullopt, std::nullopt});
  CHECK_FALSE(out.defines("t"));
}

TEST_CASE("assoc and iterate") {
  Grammar g = G("roots: e ; e : a (o a)* ;");
  Grammar out = round_trip(g, step::AssocIterate{P("e : a (o a)* ;"), std::nullopt});
  CHECK(out.productions[0].rhs == parse_rhs("a o a"));
}

TEST_CASE("inversion without payload is reported") {
  CHECK_THROWS_AS(invert_step(step::Vertical{"e", std::nullopt}), XbgfError);
}

TEST_CASE("script text round-trips every convergence script") {
  Grammar master = testsupport::load_fixture("master");
  for (const auto &name : testsupport::kSources) {
    Grammar servant = testsupport::load_fixture(name);
    Script sc = converge(servant, master).full_script();
    Script parsed = parse_script(format_script(sc));
    REQUIRE(parsed.size() == sc.size());
    CHECK_MESSAGE(canonical_eq(apply_script(servant, parsed), master), name);
  }
}

TEST_CASE("script text positions are one-based") {
  Step s = parse_step("project(p(f, a b c), 2)");
  REQUIRE(std::holds_alternative<step::Project>(s));
  CHECK(std::get<step::Project>(s).positions == std::vector<size_t>{1});
  CHECK(format_step(s) == "project(p(f, a b c), 2)");
  CHECK_THROWS_AS(parse_step("nosuchop(x)"), ParseError);
}

TEST_CASE("script errors carry the failing index") {
  Grammar g = G("roots: a ; a : b ;");
  Script sc = {step::RenameN{"b", "c"}, step::RenameN{"b", "d"}};
  try {
    apply_script(g, sc);
    FAIL("expected failure");
  } catch (const ScriptError &e) {
    CHECK(e.index() == 1);
    CHECK(e.kind() == XbgfFailure::TargetNotFound);
  }
}
