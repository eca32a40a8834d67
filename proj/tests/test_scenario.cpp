#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hardy/acceptance.hpp"
#include "hardy/beltrami.hpp"
#include "hardy/scenario.hpp"

using namespace hardy;
namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const DiagnosticsReport& find(const RunReport& r, const std::string& name) {
  for (const auto& d : r.diagnostics)
    if (d.report.name == name) return d.report;
  throw std::out_of_range(name);
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("hardylab_test_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("literals") {
  const auto c = parse_config(R"(
domain: disk
symbol: {builtin: rotation, lambda: {modulus: 1, argument: 2pi/3}}
p: 3/2
tolerances: {isometry: 1e-9}
diagnostics: [isometry]
)");
  CHECK(std::abs(c.symbol.param - std::polar(1.0, 2 * kPi / 3)) == 0.0);
  CHECK(std::abs(std::abs(c.symbol.param) - 1.0) <= 2e-16);
  CHECK(c.p == 1.5);
  CHECK(c.tol.isometry == 1e-9);
  CHECK(parse_config("domain: disk\nsymbol: {builtin: rotation, lambda: {argument: 0}}\ndiagnostics: [isometry]\n").symbol.param == cd{1.0});
  CHECK(parse_config("domain: disk\nsymbol: {builtin: moebius, a: [-(1/4), 0.5 * 0.5]}\ndiagnostics: [norm_bound]\n").symbol.param ==
        cd{-0.25, 0.25});
}

TEST_CASE("config errors carry positions") {
  const auto unknown = config_error("domain: disk\nsymbol: {builtin: rotation}\ndiagnostics: [isometry]\ntolerence: 1\n");
  CHECK(unknown.find("line 4") != std::string::npos);
  CHECK(unknown.find("tolerence") != std::string::npos);
  const auto nested = config_error("domain: disk\nsymbol:\n  builtin: rotation\n  lamda: 1\ndiagnostics: [isometry]\n");
  CHECK(nested.find("line 4, column 3") != std::string::npos);
  CHECK(config_error("domain: disk\nsymbol: {builtin: rotation}\ntolerances: {isometri: 1}\ndiagnostics: [isometry]\n").find("isometri") !=
        std::string::npos);
  CHECK(config_error("domain: disk\nsymbol: {builtin: rotation}\ndiagnostics: [isometri]\n").find("line 3") != std::string::npos);
  CHECK(config_error("domain: disk\nsymbol: {builtin: rotation, lambda: 2 +}\ndiagnostics: [isometry]\n").find("bad number") !=
        std::string::npos);
  CHECK(config_error("domain: [disk\n").find("line") == 0);
  CHECK(config_error("domain: disk\nsymbol: {builtin: rotation}\ngrid: {n_theta: 100}\ndiagnostics: [isometry]\n").find("power of two") !=
        std::string::npos);
}

TEST_CASE("kappa and compatibility checked at parse time") {
  const std::string head = "domain: disk\nsymbol: {builtin: rotation}\ndiagnostics: [isometry]\n";
  CHECK(config_error(head + "nu: {family: radial, c: 0.2, kappa: 1}\n").find("kappa") != std::string::npos);
  CHECK(config_error(head + "nu: {family: affine, a: 0.1, bx: 0.3, by: 0.4, kappa: 0.5}\n").find("exceeds kappa") != std::string::npos);
  CHECK(config_error(head + "nu: {family: radial, c: 0.2, kappa: 0.2}\nalpha: {value: 0.1}\n").find("not both") != std::string::npos);
  CHECK(config_error("domain: disk\nsymbol: {builtin: inversion}\ndiagnostics: [isometry]\n").find("incompatible") != std::string::npos);
  CHECK(config_error("domain: {kind: annulus, r0: 0.5}\nsymbol: {builtin: monomial, k: 2}\ndiagnostics: [isometry]\n").find("incompatible") !=
        std::string::npos);
  CHECK(config_error("domain: {kind: annulus, r0: 0.5}\nsymbol: {builtin: monomial, k: 2, target: {kind: annulus, r0: 1/4}}\n"
                     "diagnostics: [isometry]\n")
            .empty());
}

TEST_CASE("run_scenario") {
  const auto sq = run_scenario(parse_config("domain: disk\nsymbol: {builtin: monomial, k: 2}\ndiagnostics: [isometry]\n"));
  CHECK(sq.passed());
  CHECK(find(sq, "isometry").verdict);

  const auto rot = run_scenario(parse_config(R"(
domain: {kind: annulus, r0: 0.5}
symbol: {builtin: rotation, lambda: {modulus: 1, argument: pi/7}}
diagnostics: [isometry, omega, adjoint]
)"));
  CHECK(rot.passed());
  CHECK(find(rot, "isometry").verdict);
  const auto& om = find(rot, "omega");
  CHECK(om.status == "Case1");
  CHECK(om.get("m_1_on_outer") == 1.0);
  CHECK(om.get("m_r0_on_inner") == 1.0);
  CHECK(find(rot, "adjoint").verdict);

  const auto mob = run_scenario(parse_config("domain: disk\nsymbol: {builtin: moebius, a: 0.3}\ndiagnostics: [norm_bound, norm_estimate]\n"));
  CHECK(mob.passed());
  CHECK(find(mob, "norm_estimate").get("estimate") <= find(mob, "norm_bound").get("bound") + 1e-6);

  // A failing diagnostic is recorded and the run goes on.
  const auto part = run_scenario(parse_config("domain: disk\nsymbol: {builtin: monomial, k: 2}\ndiagnostics: [dirichlet, isometry]\n"));
  REQUIRE(part.diagnostics.size() == 2);
  CHECK(part.diagnostics[0].failed);
  CHECK(part.diagnostics[0].report.status == "error");
  CHECK(part.diagnostics[1].report.verdict);
  CHECK_FALSE(part.passed());

  // A negative classification is an answer, not a failure.
  const auto inj = run_scenario(parse_config("domain: disk\nsymbol: {builtin: monomial, k: 2}\ndiagnostics: [invertibility]\n"));
  CHECK_FALSE(find(inj, "invertibility").verdict);
  CHECK(inj.passed());
}

TEST_CASE("reports: determinism, round trip, emit") {
  const std::string text = R"(
domain: disk
symbol: {builtin: rotation, lambda: 1/2}
nu: {family: radial, c: 0.2, kappa: 0.2}
diagnostics: [compact_proxy, eval_functional, dirichlet, norm_bound]
)";
  const auto a = run_scenario(parse_config(text));
  const auto b = run_scenario(parse_config(text));
  CHECK(same_report(a, b));
  auto strip = [](RunReport r) {
    for (auto& d : r.diagnostics) d.seconds = 0.0;
    return to_json(r).dump();
  };
  CHECK(strip(a) == strip(b));

  const auto dir = scratch("emit");
  emit(a, EmitFormat::Json, dir);
  std::ifstream in(dir / "report.json");
  const auto back = report_from_json(nlohmann::ordered_json::parse(in));
  CHECK(same_report(a, back));
  CHECK(to_json(back).dump() == to_json(a).dump());
  // Nonfinite values survive as strings.
  RunReport inf = a;
  inf.diagnostics[0].report.add("big", std::numeric_limits<double>::infinity());
  CHECK(std::isinf(report_from_json(nlohmann::ordered_json::parse(to_json(inf).dump())).diagnostics[0].report.get("big")));

  const auto csv = emit(a, EmitFormat::Csv, dir);
  const auto rows = lines(csv.at(0));
  CHECK(rows.at(0) == "diagnostic,certificate,value");
  CHECK(rows.size() > 10);

  const auto plots = emit(a, EmitFormat::PlotData, dir);
  REQUIRE(plots.size() == 3);  // compact_proxy, eval_functional, dirichlet history
  const auto sigma = lines(plots[0]);
  CHECK(sigma.at(0) == "sigma");
  REQUIRE(sigma.size() == 65);
  for (std::size_t i = 2; i < sigma.size(); ++i) CHECK(std::stod(sigma[i]) < std::stod(sigma[i - 1]));
  const auto sweep = lines(plots[1]);
  CHECK(sweep.at(0) == "abs_z,norm");
  REQUIRE(sweep.size() == 9);
  for (std::size_t i = 2; i < sweep.size(); ++i)
    CHECK(std::stod(sweep[i].substr(sweep[i].find(',') + 1)) > std::stod(sweep[i - 1].substr(sweep[i - 1].find(',') + 1)));

  CHECK_THROWS_AS(emit(a, EmitFormat::Json, "/proc/hardylab/no"), std::runtime_error);
  CHECK_THROWS_AS(parse_format("pdf"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("config echo holds every tolerance") {
  const auto c = parse_config("domain: disk\nsymbol: {builtin: rotation}\ntolerances: {winding_samples: 512}\ndiagnostics: [isometry]\n");
  const auto j = config_echo(c);
  CHECK(j["tolerances"].size() == 23);
  CHECK(j["tolerances"]["winding_samples"] == 512);
  CHECK(j["tolerances"]["pde_residual"] == 1e-6);
}

TEST_CASE("selftest notices the alpha sign mutation") {
  CHECK(run_criterion(8).verdict);
  detail::set_alpha_sign_mutation(true);
  const auto r = run_criterion(8);
  detail::set_alpha_sign_mutation(false);
  CHECK_FALSE(r.verdict);
  CHECK(r.get("w_residual") > 1e-3);
}
