#pragma once
// Config-driven runs of the diagnostics, the self-test, and report output.
// The config schema is described in README.md.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardy/compop.hpp"

namespace hardy {

inline constexpr const char* kToolVersion = "0.1.0";

/// Bad config text or content; the message starts with "line L, column C:" when a position is known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SymbolSpec {
  std::string builtin;  // rotation | inversion | monomial | moebius | constant | series
  cd param{1.0, 0.0};   // lambda, mu, c or a
  int k = 1;
  int lo = 0;
  std::vector<cd> coefficients;
  std::optional<Domain> target;
};

struct FieldSpec {
  std::string family;  // nu: constant | affine | radial; alpha: constant
  double c = 0.0, a = 0.0, bx = 0.0, by = 0.0;
  cd value{};
  double kappa = 0.0;
};

struct ScenarioConfig {
  Domain domain;
  SymbolSpec symbol;
  std::optional<FieldSpec> nu;
  std::optional<FieldSpec> alpha;
  double p = 2.0;
  GridSpec grid{65, 64};
  Tolerances tol;
  std::uint64_t seed = 1;
  int trials = 20;
  int n_samples = 1024;
  int matrix_size = 64;
  std::vector<cd> eval_points{0.0, 0.5, 0.9};
  int eval_sweep = 8;
  int eval_modes = 256;
  std::optional<cd> adjoint_point;  // default: 0.3 + 0.2i on the disk, ((1 + r0)/2) e^{0.5i} on the annulus
  cd witness_z1{0.0, 0.0}, witness_z2{0.3, 0.2};
  std::vector<std::string> diagnostics;
};

// Names accepted in the diagnostics list, in a stable order.
const std::vector<std::string>& diagnostic_names();

ScenarioConfig parse_config(const std::string& yaml_text);
ScenarioConfig load_config(const std::filesystem::path& file);
// Fully resolved config (every default and tolerance spelled out).
nlohmann::ordered_json config_echo(const ScenarioConfig& cfg);
// Throws ConfigError when the symbol does not map the domain into its codomain.
AnalyticSelfMap build_symbol(const ScenarioConfig& cfg);

struct DiagnosticRun {
  DiagnosticsReport report;
  double seconds = 0.0;
  // The diagnostic threw, or a consistency check came out false. A negative
  // answer from a classifier (isometry, invertibility, compact_proxy) is not a failure.
  bool failed = false;
};

struct RunReport {
  std::string tool = "hardylab";
  std::string version = kToolVersion;
  std::string isa;  // kernel variant that produced the numbers
  nlohmann::ordered_json config;
  std::vector<DiagnosticRun> diagnostics;

  bool passed() const;
};

// Resolved evaluation point of the adjoint diagnostic.
cd adjoint_point(const ScenarioConfig& cfg);
// Diagnostics run in the declared order; one that throws is recorded as a
// failed verdict with the message in its notes and the run continues.
RunReport run_scenario(const ScenarioConfig& cfg);
// The acceptance suite as a report. Criterion lines go to `progress` if set.
RunReport selftest(bool mutate = false, bool scalar = false, std::FILE* progress = nullptr);

nlohmann::ordered_json to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::ordered_json& j);
// Equality of everything but timings.
bool same_report(const RunReport& a, const RunReport& b);

enum class EmitFormat { Json, Csv, PlotData };
EmitFormat parse_format(const std::string& name);
// Writes report.json, report.csv or plot/<nn>_<diagnostic>.csv under dir;
// returns the files written. Throws std::runtime_error when dir is unwritable.
std::vector<std::filesystem::path> emit(const RunReport& r, EmitFormat f, const std::filesystem::path& dir);

}  // namespace hardy
