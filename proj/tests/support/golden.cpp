#include "golden.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gramconv/bgf_text.hpp"

namespace testsupport {

using namespace gramconv;

const std::vector<std::string> kSources = {"antlr",    "dcg",      "emf", "jaxb", "om",  "python",
                                           "rascal-a", "rascal-c", "sdf", "txl",  "xsd"};

namespace {

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string sorted_pattern(std::string p) {
  auto rank = [](char c) { return std::string("1+*?").find(c); };
  std::sort(p.begin(), p.end(), [&](char a, char b) { return rank(a) < rank(b); });
  return p;
}

std::set<SigEntry> as_set(const Signature &s) { return {s.begin(), s.end()}; }

Grammar load_fixture(const std::string &name) {
  return parse_bgf(slurp(std::string(FIXTURE_DIR) + "/" + name + ".bgf"));
}

Golden load_golden(const std::string &name) {
  std::istringstream in(slurp(std::string(GOLDEN_DIR) + "/" + name + ".txt"));
  Golden g;
  std::string line, section = "anf";
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line == "mapping:" || line == "structural:") {
      section = line.substr(0, line.size() - 1);
      continue;
    }
    if (section == "anf") {
      size_t bar = line.rfind(" | ");
      g.anf.push_back(parse_bgf(line.substr(0, bar)).productions.at(0));
      std::istringstream sig(line.substr(bar + 3));
      std::set<SigEntry> entries;
      for (std::string item; sig >> item;) {
        size_t colon = item.rfind(':');
        entries.insert({item.substr(0, colon), sorted_pattern(item.substr(colon + 1))});
      }
      g.signatures.push_back(entries);
    } else if (section == "mapping") {
      std::istringstream pair(line);
      std::string from, to;
      pair >> from >> to;
      g.mapping.emplace(from, to == "ω" ? Target{} : Target{to});
    } else {
      g.structural.insert(line);
    }
  }
  return g;
}

}  // namespace testsupport
