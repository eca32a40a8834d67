// One line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "hardy/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("-c,--criterion", only, "run a single criterion")->check(CLI::Range(1, hardy::kCriterionCount));
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (int id = 1; id <= hardy::kCriterionCount; ++id) {
    if (only != 0 && id != only) continue;
    const auto r = hardy::run_criterion(id);
    all = all && r.verdict;
    std::string line = std::string(r.verdict ? "PASS" : "FAIL") + "  " + r.name + " |";
    for (const auto& [k, v] : r.certificates) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " %s=%.3g", k.c_str(), v);
      line += buf;
    }
    for (const auto& n : r.notes) line += " [" + n + "]";
    std::puts(line.c_str());
  }
  return all ? 0 : 1;
}
