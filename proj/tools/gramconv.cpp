// gramconv: command-line front end for grammar convergence.
//
// Exit codes: 0 success, 1 domain failure, 2 usage or I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gramconv/anf.hpp"
#include "gramconv/bgf_json.hpp"
#include "gramconv/bgf_text.hpp"
#include "gramconv/converge.hpp"
#include "gramconv/notation.hpp"
#include "gramconv/prodsig.hpp"
#include "gramconv/report.hpp"
#include "gramconv/script_text.hpp"

namespace fs = std::filesystem;
using namespace gramconv;
using nlohmann::json;

namespace {

struct Failure {
  int code;
  std::string phase;
  std::string detail;
};

bool color() {
  const char *v = std::getenv("GRAMCONV_COLOR");
  return v && std::string(v) == "1";
}

std::string paint(const std::string &s, const char *ansi) {
  return color() ? std::string("\x1b[") + ansi + "m" + s + "\x1b[0m" : s;
}

void report_error(const std::string &phase, const std::string &detail) {
  std::string line = detail.substr(0, detail.find('\n'));
  std::cerr << paint("ERROR", "31") << " " << phase << " " << line << "\n";
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{2, "io", "cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{2, "io", "cannot write " + path};
  out << text;
}

// Write to `path`, or to stdout when empty.
void emit(const std::string &path, const std::string &text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

Grammar load(const std::string &path) {
  std::string text = read_file(path);
  try {
    return parse_bgf(text);
  } catch (const ParseError &e) {
    throw Failure{2, "parse", path + ":" + e.what()};
  }
}

std::string stem(const std::string &path) { return fs::path(path).stem().string(); }

json script_json(const Script &sc) {
  json a = json::array();
  for (const auto &s : sc) a.push_back(format_step(s));
  return a;
}

json mapping_json(const NominalMapping &m) {
  json a = json::array();
  for (const auto &[from, to] : m.pairs)
    a.push_back({{"servant", from}, {"master", to ? json(*to) : json(nullptr)}});
  return a;
}

json match_json(const GrammarMatch &gm) {
  json prods = json::array();
  for (const auto &p : gm.pairs) {
    json kind = nullptr;
    if (p.kind) kind = p.kind->strong ? "strong" : "weak";
    prods.push_back({{"servant_lhs", p.servant.lhs},
                     {"servant", notation(p.servant)},
                     {"master", p.master ? json(notation(*p.master)) : json(nullptr)},
                     {"kind", kind}});
  }
  return {{"productions", prods}, {"mapping", mapping_json(gm.mapping)},
          {"strong", gm.strong_count}};
}

ConvergenceResult run_converge(const Grammar &servant, const Grammar &master) {
  try {
    return converge(servant, master);
  } catch (const ConvergenceError &e) {
    throw Failure{1, e.phase(), e.what()};
  }
}

int cmd_show(const std::string &path, bool as_json) {
  Grammar g = load(path);
  if (as_json) {
    std::cout << grammar_to_json(g).dump(2) << "\n";
  } else {
    std::cout << serialize_bgf(g);
  }
  return 0;
}

int cmd_normalize(const std::string &path, bool check, bool as_json, const std::string &out) {
  Grammar g = load(path);
  if (check) {
    bool ok = is_anf(g);
    std::cout << (ok ? "ANF" : "not ANF") << "\n";
    return ok ? 0 : 1;
  }
  AnfGrammar a;
  try {
    a = normalize(g);
  } catch (const NormalizationError &e) {
    throw Failure{1, "normalize", e.what()};
  }
  if (as_json) {
    json j = {{"grammar", grammar_to_json(a.grammar)}, {"trace", script_json(a.trace)}};
    emit(out, j.dump(2) + "\n");
  } else {
    emit(out, serialize_bgf(a.grammar));
  }
  return 0;
}

int cmd_sig(const std::string &path) {
  Grammar g = load(path);
  std::vector<std::tuple<std::string, std::string, std::string>> lines;
  for (const auto &p : g.productions) {
    Signature s;
    try {
      s = production_signature(p);
    } catch (const MatchError &e) {
      throw Failure{1, "sig", e.what()};
    }
    std::string rhs = format_rhs(p.rhs);
    lines.emplace_back(p.lhs, format_signature(s),
                       "p(" + (p.label.empty() ? "" : p.label + ", ") + p.lhs + ", " + rhs + ")");
  }
  std::sort(lines.begin(), lines.end());
  for (const auto &[lhs, sig, prod] : lines) std::cout << prod << "  =>  " << sig << "\n";
  return 0;
}

int cmd_match(const std::string &master_path, const std::string &servant_path, bool as_json) {
  Grammar master = load(master_path);
  Grammar servant = load(servant_path);
  GrammarMatch gm;
  try {
    Grammar mutated = trigger_mutations(servant, master).first;
    gm = match_grammars(normalize(mutated).grammar, master);
  } catch (const NormalizationError &e) {
    throw Failure{1, "normalize", e.what()};
  } catch (const MatchError &e) {
    throw Failure{1, "match", e.what()};
  } catch (const ConvergenceError &e) {
    throw Failure{1, e.phase(), e.what()};
  }
  if (as_json) {
    std::cout << match_json(gm).dump(2) << "\n";
    return 0;
  }
  for (const auto &p : gm.pairs) {
    std::string rel = !p.kind ? "∅" : p.kind->strong ? "≃" : "⋈";
    std::cout << notation(p.servant) << "  " << rel;
    if (p.master) std::cout << "  " << notation(*p.master);
    std::cout << "\n";
  }
  for (const auto &[from, to] : gm.mapping.pairs)
    std::cout << from << " -> " << (to ? *to : "ω") << "\n";
  return 0;
}

json result_json(const ConvergenceResult &r) {
  return {{"mutations", script_json(r.mutations)},
          {"normalization", script_json(r.normalization)},
          {"mapping", mapping_json(r.match.mapping)},
          {"renames", script_json(r.renames)},
          {"structural", script_json(r.structural)},
          {"final", grammar_to_json(r.final)}};
}

// Runs `job` on every .bgf in `dir` except the master, in parallel.
int run_all(const std::string &dir, const std::string &master_path, bool fail_fast,
            const std::function<std::string(const std::string &)> &job) {
  std::vector<std::string> inputs;
  std::error_code ec;
  for (const auto &entry : fs::directory_iterator(dir, ec)) {
    if (entry.path().extension() != ".bgf") continue;
    if (fs::equivalent(entry.path(), master_path, ec)) continue;
    inputs.push_back(entry.path().string());
  }
  if (ec) throw Failure{2, "io", "cannot list " + dir};
  std::sort(inputs.begin(), inputs.end());
  std::vector<std::string> lines(inputs.size());
  std::vector<bool> ok(inputs.size(), false);
  std::atomic<bool> stop{false};
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next++) < inputs.size();) {
      if (stop) {
        lines[i] = stem(inputs[i]) + ": skipped";
        continue;
      }
      try {
        lines[i] = stem(inputs[i]) + ": " + job(inputs[i]);
        ok[i] = true;
      } catch (const Failure &f) {
        lines[i] = stem(inputs[i]) + ": ERROR " + f.phase + " " + f.detail.substr(0, f.detail.find('\n'));
        if (fail_fast) stop = true;
      }
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                static_cast<unsigned>(inputs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto &t : pool) t.join();
  int code = 0;
  for (size_t i = 0; i < inputs.size(); ++i) {
    std::cout << lines[i] << "\n";
    if (!ok[i]) code = 1;
  }
  return code;
}

int cmd_converge(const std::string &master_path, const std::string &servant_path,
                 const std::string &out, bool as_json, const std::string &all, bool fail_fast) {
  Grammar master = load(master_path);
  if (!all.empty()) {
    if (!out.empty()) fs::create_directories(out);
    return run_all(all, master_path, fail_fast, [&](const std::string &path) {
      ConvergenceResult r = run_converge(load(path), master);
      if (!out.empty())
        write_file((fs::path(out) / (stem(path) + ".xbgf")).string(), format_script(r.full_script()));
      return std::to_string(r.full_script().size()) + " steps, verified";
    });
  }
  if (servant_path.empty()) throw Failure{2, "usage", "converge needs a servant grammar or --all"};
  ConvergenceResult r = run_converge(load(servant_path), master);
  std::string why;
  if (!verify(r.servant, r.full_script(), master, &why)) throw Failure{1, "verify", why};
  emit(out, as_json ? result_json(r).dump(2) + "\n" : format_script(r.full_script()));
  return 0;
}

int cmd_apply(const std::string &grammar_path, const std::string &script_path,
              const std::string &out) {
  Grammar g = load(grammar_path);
  Script sc;
  try {
    sc = parse_script(read_file(script_path));
  } catch (const ParseError &e) {
    throw Failure{2, "parse", script_path + ":" + e.what()};
  }
  try {
    emit(out, serialize_bgf(apply_script(g, sc)));
  } catch (const ScriptError &e) {
    throw Failure{1, "apply", e.what()};
  }
  return 0;
}

int cmd_diff(const std::string &a_path, const std::string &b_path) {
  Grammar a = load(a_path);
  Grammar b = load(b_path);
  if (canonical_eq(a, b)) return 0;
  auto sorted_roots = [](std::vector<std::string> r) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
  };
  auto ra = sorted_roots(a.roots);
  auto rb = sorted_roots(b.roots);
  if (ra != rb) {
    std::cout << paint("- roots:", "31");
    for (const auto &r : ra) std::cout << " " << r;
    std::cout << "\n" << paint("+ roots:", "32");
    for (const auto &r : rb) std::cout << " " << r;
    std::cout << "\n";
  }
  std::vector<Production> pa = a.productions;
  std::vector<Production> pb = b.productions;
  std::sort(pa.begin(), pa.end());
  std::sort(pb.begin(), pb.end());
  std::vector<Production> only_a, only_b;
  std::set_difference(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(only_a));
  std::set_difference(pb.begin(), pb.end(), pa.begin(), pa.end(), std::back_inserter(only_b));
  for (const auto &p : only_a) std::cout << paint("- " + format_production(p), "31") << "\n";
  for (const auto &p : only_b) std::cout << paint("+ " + format_production(p), "32") << "\n";
  return 1;
}

int cmd_report(const std::string &master_path, const std::string &servant_path,
               const std::string &out, const std::string &all, bool noop_renames, bool fail_fast) {
  Grammar master = load(master_path);
  ReportOptions options{noop_renames};
  if (!all.empty()) {
    if (out.empty()) throw Failure{2, "usage", "report --all needs -o DIR"};
    fs::create_directories(out);
    return run_all(all, master_path, fail_fast, [&](const std::string &path) {
      ConvergenceResult r = run_converge(load(path), master);
      std::string file = (fs::path(out) / (stem(path) + ".md")).string();
      write_file(file, generate_report(r, stem(path), options));
      return file;
    });
  }
  if (servant_path.empty()) throw Failure{2, "usage", "report needs a servant grammar or --all"};
  ConvergenceResult r = run_converge(load(servant_path), master);
  emit(out, generate_report(r, stem(servant_path), options));
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Guided grammar convergence toolkit"};
  app.require_subcommand(1);

  std::string a, b, out, all;
  bool as_json = false, check = false, fail_fast = false, noop = false;

  auto *show = app.add_subcommand("show", "Print a grammar");
  show->add_option("grammar", a, "BGF file")->required();
  show->add_flag("--json", as_json, "JSON output");

  auto *norm = app.add_subcommand("normalize", "Normalize to ANF");
  norm->add_option("grammar", a, "BGF file")->required();
  norm->add_flag("--check", check, "Only test whether the grammar is in ANF (exit 0/1)");
  norm->add_flag("--json", as_json, "Grammar and trace as JSON");
  norm->add_option("-o", out, "Output file");

  auto *sig = app.add_subcommand("sig", "Production signatures of an ANF grammar");
  sig->add_option("grammar", a, "BGF file")->required();

  auto *match = app.add_subcommand("match", "Match a servant against the master");
  match->add_option("master", a, "Master BGF")->required();
  match->add_option("servant", b, "Servant BGF")->required();
  match->add_flag("--json", as_json, "JSON output");

  auto *conv = app.add_subcommand("converge", "Emit the script turning a servant into the master");
  conv->add_option("master", a, "Master BGF")->required();
  conv->add_option("servant", b, "Servant BGF");
  conv->add_option("-o", out, "Script file (directory with --all)");
  conv->add_flag("--json", as_json, "All sub-scripts and the final grammar as JSON");
  conv->add_option("--all", all, "Converge every .bgf in a directory");
  conv->add_flag("--fail-fast", fail_fast, "Stop after the first failure with --all");

  auto *apply = app.add_subcommand("apply", "Apply a script to a grammar");
  apply->add_option("grammar", a, "BGF file")->required();
  apply->add_option("script", b, "Script file")->required();
  apply->add_option("-o", out, "Output file");

  auto *diff = app.add_subcommand("diff", "Compare two grammars up to production order");
  diff->add_option("left", a, "BGF file")->required();
  diff->add_option("right", b, "BGF file")->required();

  auto *rep = app.add_subcommand("report", "Markdown convergence report");
  rep->add_option("master", a, "Master BGF")->required();
  rep->add_option("servant", b, "Servant BGF");
  rep->add_option("-o", out, "Report file (directory with --all)");
  rep->add_option("--all", all, "Report every .bgf in a directory");
  rep->add_flag("--noop-renames", noop, "List identity renames too");
  rep->add_flag("--fail-fast", fail_fast, "Stop after the first failure with --all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*show) return cmd_show(a, as_json);
    if (*norm) return cmd_normalize(a, check, as_json, out);
    if (*sig) return cmd_sig(a);
    if (*match) return cmd_match(a, b, as_json);
    if (*conv) return cmd_converge(a, b, out, as_json, all, fail_fast);
    if (*apply) return cmd_apply(a, b, out);
    if (*diff) return cmd_diff(a, b);
    if (*rep) return cmd_report(a, b, out, all, noop, fail_fast);
  } catch (const Failure &f) {
    report_error(f.phase, f.detail);
    return f.code;
  } catch (const std::exception &e) {
    report_error("internal", e.what());
    return 2;
  }
  return 2;
}
