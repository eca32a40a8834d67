// hardylab: run <config> | selftest | emit <report.json | config.yaml>
// Exit status: 0 success, 1 a diagnostic or criterion failed, 2 config or usage error.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hardy/scenario.hpp"

namespace {

using hardy::RunReport;

int write_all(const RunReport& r, const std::vector<std::string>& formats, const std::string& out) {
  for (const auto& f : formats)
    for (const auto& p : hardy::emit(r, hardy::parse_format(f), out)) std::fprintf(stderr, "wrote %s\n", p.string().c_str());
  return 0;
}

RunReport load_or_run(const std::string& input) {
  if (input.size() >= 5 && input.compare(input.size() - 5, 5, ".json") == 0) {
    std::ifstream in(input);
    if (!in) throw hardy::ConfigError("cannot read " + input);
    try {
      return hardy::report_from_json(nlohmann::ordered_json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw hardy::ConfigError(input + ": not a report: " + e.what());
    }
  }
  return hardy::run_scenario(hardy::load_config(input));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composition operators on generalized Hardy spaces: scenario runner"};
  app.require_subcommand(1);

  std::string config, input, out;
  std::vector<std::string> formats;
  bool mutate = false, scalar = false;

  auto* run = app.add_subcommand("run", "run the diagnostics listed in a config; prints the JSON report");
  run->add_option("config", config, "YAML scenario file")->required();
  run->add_option("--out", out, "also write report files into this directory");
  run->add_option("--format", formats, "json, csv, plot-data (with --out; default json)");

  auto* self = app.add_subcommand("selftest", "run the acceptance suite");
  self->add_flag("--mutate", mutate, "flip the sign in alpha = -dbar(nu)/(1 - nu^2); the suite must notice");
  self->add_flag("--scalar", scalar, "use the scalar kernels only");
  self->add_option("--out", out, "write report files into this directory");
  self->add_option("--format", formats, "json, csv, plot-data (with --out; default json)");

  auto* em = app.add_subcommand("emit", "write a report (a saved report.json, or a config to run) in the given formats");
  em->add_option("input", input, "report .json or scenario .yaml")->required();
  em->add_option("--format", formats, "json, csv, plot-data")->required();
  em->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (formats.empty()) formats.push_back("json");

  try {
    for (const auto& f : formats) (void)hardy::parse_format(f);
    RunReport r;
    if (*run) {
      r = hardy::run_scenario(hardy::load_config(config));
      std::cout << hardy::to_json(r).dump(2) << '\n';
      if (!out.empty()) write_all(r, formats, out);
    } else if (*self) {
      r = hardy::selftest(mutate, scalar, stdout);
      double total = 0.0;
      for (const auto& d : r.diagnostics) total += d.seconds;
      std::printf("%s (%.1f s, %s kernels)\n", r.passed() ? "all criteria pass" : "some criteria FAIL", total, r.isa.c_str());
      if (!out.empty()) write_all(r, formats, out);
    } else {
      r = load_or_run(input);
      write_all(r, formats, out);
    }
    return r.passed() ? 0 : 1;
  } catch (const hardy::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
