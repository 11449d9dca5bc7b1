// Acceptance criteria 1-8, one PASS/FAIL line each.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "gramconv/anf.hpp"
#include "gramconv/bgf_text.hpp"
#include "gramconv/converge.hpp"
#include "support/golden.hpp"
#include "support/oracle.hpp"
#include "support/random_grammar.hpp"

using namespace gramconv;
using namespace testsupport;

namespace {

using Check = std::function<std::string()>;  // empty string means pass

std::multiset<std::string> families(const Script &sc) {
  std::multiset<std::string> out;
  for (const auto &s : sc) out.insert(step_family(s));
  return out;
}

std::string anf_reproduction() {
  Grammar master = load_fixture("master");
  std::ostringstream bad;
  for (const auto &name : kSources) {
    Golden gold = load_golden(name);
    Grammar anf = normalize(trigger_mutations(load_fixture(name), master).first).grammar;
    std::multiset<Production> got(anf.productions.begin(), anf.productions.end());
    std::multiset<Production> want(gold.anf.begin(), gold.anf.end());
    std::set<std::set<SigEntry>> got_sigs, want_sigs(gold.signatures.begin(), gold.signatures.end());
    for (const auto &p : anf.productions) got_sigs.insert(as_set(production_signature(p)));
    if (got != want || got_sigs != want_sigs) bad << " " << name;
  }
  return bad.str();
}

std::string nominal_mappings() {
  Grammar master = load_fixture("master");
  std::ostringstream bad;
  for (const auto &name : kSources) {
    Grammar anf = normalize(trigger_mutations(load_fixture(name), master).first).grammar;
    auto pairs = match_grammars(anf, master).mapping.pairs;
    if (std::set(pairs.begin(), pairs.end()) != load_golden(name).mapping) bad << " " << name;
  }
  return bad.str();
}

std::string structural_scripts() {
  Grammar master = load_fixture("master");
  std::ostringstream bad;
  for (const auto &name : kSources)
    if (families(converge(load_fixture(name), master).structural) != load_golden(name).structural)
      bad << " " << name;
  return bad.str();
}

std::string soundness() {
  Grammar master = load_fixture("master");
  std::ostringstream bad;
  for (const auto &name : kSources) {
    Grammar servant = load_fixture(name);
    ConvergenceResult r = converge(servant, master);
    if (!verify(servant, r.full_script(), master) || !canonical_eq(r.final, master)) bad << " " << name;
  }
  return bad.str();
}

std::string bidirectionality() {
  Grammar master = load_fixture("master");
  int checked = 0, failed = 0;
  for (const auto &name : kSources) {
    Grammar g = load_fixture(name);
    for (const auto &s : converge(g, master).full_script()) {
      Applied fwd = apply_step(g, s);
      Applied back = apply_step(fwd.grammar, invert_step(fwd.step));
      Grammar again = apply_step(back.grammar, fwd.step).grammar;
      if (!canonical_eq(back.grammar, g) || !canonical_eq(again, fwd.grammar)) ++failed;
      g = fwd.grammar;
      ++checked;
    }
  }
  std::cout << "  (" << checked << " step applications)\n";
  return failed ? std::to_string(failed) + " of " + std::to_string(checked) + " failed" : "";
}

std::string oracle_equivalence() {
  Grammar master = load_fixture("master");
  std::ostringstream bad;
  auto agree = [&](const Grammar &servant, const Grammar &m, const std::string &what) {
    auto best = oracle_best_strong(servant, m);
    try {
      GrammarMatch gm = match_grammars(servant, m);
      if (!best || gm.strong_count != *best || !check_matching(servant, m, gm).empty()) bad << " " << what;
    } catch (const MatchError &) {
      if (best) bad << " " << what;
    }
  };
  for (const auto &name : kSources)
    agree(normalize(trigger_mutations(load_fixture(name), master).first).grammar, master, name);
  for (uint32_t seed = 1; seed <= 100; ++seed) {
    auto [servant, m] = random_servant_master(seed);
    agree(servant, m, "seed" + std::to_string(seed));
  }
  return bad.str();
}

std::string idempotence() {
  Grammar master = load_fixture("master");
  std::ostringstream bad;
  auto fixed_point = [&](const Grammar &g, const std::string &what) {
    try {
      Grammar once = normalize(g).grammar;
      AnfGrammar twice = normalize(once);
      if (!twice.trace.empty() || !canonical_eq(twice.grammar, once)) bad << " " << what;
    } catch (const NormalizationError &) {
      bad << " " << what << "(unsupported)";
    }
  };
  for (const auto &name : kSources)
    fixed_point(trigger_mutations(load_fixture(name), master).first, name);
  fixed_point(master, "master");
  for (uint32_t seed = 1; seed <= 100; ++seed) fixed_point(random_bgf(seed), "seed" + std::to_string(seed));
  return bad.str();
}

std::string self_convergence() {
  Grammar master = load_fixture("master");
  ConvergenceResult r = converge(master, master);
  if (!r.mutations.empty()) return "mutations";
  if (!r.renames.empty()) return "renames";
  if (!r.structural.empty()) return "structural";
  if (!verify(master, r.full_script(), master)) return "verify";
  return "";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, Check>> criteria = {
      {"ANF reproduction", anf_reproduction},
      {"Nominal mappings", nominal_mappings},
      {"Structural scripts", structural_scripts},
      {"Convergence soundness", soundness},
      {"Bidirectionality", bidirectionality},
      {"Oracle equivalence", oracle_equivalence},
      {"Idempotence", idempotence},
      {"Self-convergence", self_convergence},
  };
  auto start = std::chrono::steady_clock::now();
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    std::string problem;
    try {
      problem = criteria[i].second();
    } catch (const std::exception &e) {
      problem = std::string("exception: ") + e.what();
    }
    bool ok = problem.empty();
    failures += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first;
    if (!ok) std::cout << ":" << (problem[0] == ' ' ? "" : " ") << problem;
    std::cout << "\n";
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "elapsed " << secs << " s\n";
  return failures == 0 ? 0 : 1;
}
