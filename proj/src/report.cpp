#include "gramconv/report.hpp"

#include <sstream>

#include "gramconv/notation.hpp"
#include "gramconv/prodsig.hpp"

namespace gramconv {

namespace {

std::string code(const std::string &s) { return "`" + s + "`"; }

std::string cell(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return code(out);
}

std::string code(const Production &p) { return code(notation(p)); }

std::string codes(const std::vector<Production> &ps) {
  std::string out;
  for (size_t i = 0; i < ps.size(); ++i) out += (i ? ", " : "") + code(ps[i]);
  return out;
}

std::string names(const std::vector<std::string> &ns) {
  std::string out = "[";
  for (size_t i = 0; i < ns.size(); ++i) out += (i ? ", " : "") + ns[i];
  return out + "]";
}

struct Detail {
  std::string operator()(const step::RenameN &s) const { return code(s.from) + " to " + code(s.to); }
  std::string operator()(const step::Reroot &s) const {
    return names(s.from.value_or(std::vector<std::string>{})) + " to " + names(s.to);
  }
  std::string operator()(const step::Unlabel &s) const { return code(s.target); }
  std::string operator()(const step::Designate &s) const {
    Production p = s.target;
    if (s.selector) {
      p.rhs = Expr::selector(s.label, p.rhs);
    } else {
      p.label = s.label;
    }
    return code(p);
  }
  std::string operator()(const step::Anonymize &s) const { return code(s.target); }
  std::string operator()(const step::Deanonymize &s) const { return code(s.restored); }
  std::string operator()(const step::Abstractize &s) const { return code(s.target); }
  std::string operator()(const step::Concretize &s) const { return code(s.restored); }
  std::string operator()(const step::Massage &s) const {
    return code(s.target) + " to " + code(s.result);
  }
  std::string operator()(const step::Vertical &s) const { return "in " + code(s.nt); }
  std::string operator()(const step::Horizontal &s) const { return "in " + code(s.nt); }
  std::string operator()(const step::Undefine &s) const {
    return s.saved ? codes(*s.saved) : code(s.nt);
  }
  std::string operator()(const step::Define &s) const { return codes(s.productions); }
  std::string operator()(const step::Eliminate &s) const {
    return s.saved ? codes(*s.saved) : code(s.nt);
  }
  std::string operator()(const step::Introduce &s) const { return codes(s.productions); }
  std::string operator()(const step::Unchain &s) const { return code(s.chain); }
  std::string operator()(const step::Chain &s) const { return code(s.target); }
  std::string operator()(const step::Abridge &s) const { return code(s.target); }
  std::string operator()(const step::Detour &s) const { return code(s.target); }
  std::string operator()(const step::Extract &s) const {
    return "in " + code(s.scope) + " " + code(s.definition);
  }
  std::string operator()(const step::Inline &s) const {
    return s.definition ? code(*s.definition) : code(s.nt);
  }
  std::string operator()(const step::Project &s) const {
    std::string out = code(s.target) + " at";
    for (size_t k : s.positions) out += " " + std::to_string(k + 1);
    return out;
  }
  std::string operator()(const step::Inject &s) const { return code(s.target); }
  std::string operator()(const step::Narrow &s) const {
    return "in " + code(s.scope) + " " + code(notation(s.from)) + " to " + code(notation(s.to));
  }
  std::string operator()(const step::Widen &s) const {
    return "in " + code(s.scope) + " " + code(notation(s.from)) + " to " + code(notation(s.to));
  }
  std::string operator()(const step::Permute &s) const {
    std::string out = code(s.target) + " to order";
    for (size_t k : s.order) out += " " + std::to_string(k + 1);
    return out;
  }
  std::string operator()(const step::Unite &s) const { return code(s.from) + " into " + code(s.into); }
  std::string operator()(const step::SplitN &s) const {
    return code(s.into) + " back into " + code(s.from);
  }
  std::string operator()(const step::AssocIterate &s) const {
    return code(s.result.value_or(s.target));
  }
  std::string operator()(const step::Iterate &s) const { return code(s.restored); }
};

void steps(std::ostringstream &out, const Script &sc) {
  for (const auto &s : sc) out << "- " << report_step(s) << "\n";
}

}  // namespace

std::string report_step(const Step &s) {
  return "**" + step_family(s) + "** " + std::visit(Detail{}, s);
}

std::string generate_report(const ConvergenceResult &r, const std::string &source_name,
                            const ReportOptions &options) {
  std::ostringstream out;
  out << "# " << source_name << "\n\n";

  out << "## Source grammar\n\n";
  out << "Roots: " << names(r.servant.roots) << "\n\n";
  out << "| Production rules |\n|---|\n";
  for (const auto &p : r.servant.productions) out << "| " << cell(notation(p)) << " |\n";
  out << "\n";

  if (!r.mutations.empty()) {
    out << "## Mutations\n\n";
    steps(out, r.mutations);
    out << "\n";
  }

  out << "## Normalizations\n\n";
  if (r.normalization.empty()) out << "None.\n";
  steps(out, r.normalization);
  out << "\n";

  out << "## Grammar in ANF\n\n";
  out << "| Production rule | Production signature |\n|---|---|\n";
  for (const auto &p : r.anf.productions)
    out << "| " << cell(notation(p)) << " | " << cell(format_signature(production_signature(p)))
        << " |\n";
  out << "\n";

  out << "## Nominal resolution\n\n";
  out << "Production rules are matched as follows (ANF on the left, master grammar on the right):\n\n";
  out << "| ANF | | Master |\n|---|:-:|---|\n";
  for (const auto &pair : r.match.pairs) {
    std::string rel = !pair.kind ? "∅" : pair.kind->strong ? "≃" : "⋈";
    out << "| " << cell(notation(pair.servant)) << " | " << rel << " | "
        << (pair.master ? cell(notation(*pair.master)) : std::string()) << " |\n";
  }
  out << "\nMapping " << code(source_name + " ⋄ master") << ":\n\n";
  for (const auto &[from, to] : r.match.mapping.pairs)
    out << "- ⟨" << from << ", " << (to ? *to : "ω") << "⟩\n";
  out << "\nRenames:\n\n";
  size_t next = 0;
  bool any = false;
  for (const auto &[from, to] : r.match.mapping.pairs) {
    if (!to) continue;
    if (*to == from) {
      if (options.noop_renames) {
        out << "- **renameN-renameN** " << code(from) << " to " << code(*to) << "\n";
        any = true;
      }
      continue;
    }
    // Renames follow mapping order; a clash adds a temporary rename before.
    while (next < r.renames.size()) {
      const auto &s = r.renames[next++];
      out << "- " << report_step(s) << "\n";
      any = true;
      if (std::get<step::RenameN>(s).to == *to) break;
    }
  }
  while (next < r.renames.size()) {
    out << "- " << report_step(r.renames[next++]) << "\n";
    any = true;
  }
  if (!any) out << "None.\n";
  out << "\n";

  if (!r.structural.empty()) {
    out << "## Structural resolution\n\n";
    steps(out, r.structural);
    out << "\n";
  }
  return out.str();
}

}  // namespace gramconv
