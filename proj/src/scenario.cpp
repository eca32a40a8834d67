#include "hardy/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "hardy/acceptance.hpp"
#include "hardy/annulus_surface.hpp"
#include "hardy/beltrami.hpp"
#include "hardy/error.hpp"
#include "hardy/kernels.hpp"

namespace hardy {

using json = nlohmann::ordered_json;

namespace {

// ------------------------------------------------------------ literal parser

std::string where(const YAML::Node& n) {
  const auto m = n.Mark();
  if (m.is_null()) return "";
  return "line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ": ";
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& msg) { throw ConfigError(where(n) + msg); }

// Real expressions: numbers, pi, + - * /, parentheses, and implicit
// multiplication as in "2pi/3".
class Expr {
 public:
  explicit Expr(std::string s) : s_(std::move(s)) {}

  double parse() {
    const double v = sum();
    skip();
    if (i_ != s_.size()) throw std::invalid_argument("unexpected '" + s_.substr(i_) + "'");
    return v;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  double sum() {
    double v = product();
    for (;;) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }
  double product() {
    double v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) v /= unary();
      else if (starts_primary()) v *= primary();
      else return v;
    }
  }
  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return primary();
  }
  bool starts_primary() {
    skip();
    return i_ < s_.size() && (s_[i_] == '(' || s_.compare(i_, 2, "pi") == 0);
  }
  double primary() {
    skip();
    if (eat('(')) {
      const double v = sum();
      if (!eat(')')) throw std::invalid_argument("missing ')'");
      return v;
    }
    if (s_.compare(i_, 2, "pi") == 0) {
      i_ += 2;
      return kPi;
    }
    if (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) {
      const char* begin = s_.c_str() + i_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      i_ += static_cast<std::size_t>(end - begin);
      return v;
    }
    throw std::invalid_argument(i_ < s_.size() ? "unexpected '" + s_.substr(i_) + "'" : "unexpected end");
  }

  std::string s_;
  std::size_t i_ = 0;
};

double real_of(const YAML::Node& n) {
  if (!n.IsScalar()) fail(n, "expected a number");
  try {
    const double v = Expr(n.Scalar()).parse();
    if (!std::isfinite(v)) fail(n, "not a finite number: " + n.Scalar());
    return v;
  } catch (const std::invalid_argument& e) {
    fail(n, "bad number '" + n.Scalar() + "': " + e.what());
  }
}

long long int_of(const YAML::Node& n) {
  const double v = real_of(n);
  if (v != std::floor(v) || std::abs(v) > 1e15) fail(n, "expected an integer");
  return static_cast<long long>(v);
}

int int_in(const YAML::Node& n, long long lo, long long hi) {
  const long long v = int_of(n);
  if (v < lo || v > hi) fail(n, "integer out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

void check_keys(const YAML::Node& n, std::initializer_list<const char*> allowed, const std::string& ctx) {
  if (!n.IsMap()) fail(n, ctx + ": expected a mapping");
  for (const auto& kv : n) {
    const std::string k = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      fail(kv.first, "unknown key '" + k + "' in " + ctx);
  }
}

// Complex literal: a real expression, [re, im], {re, im} or {modulus, argument}.
cd complex_of(const YAML::Node& n) {
  if (n.IsScalar()) return real_of(n);
  if (n.IsSequence()) {
    if (n.size() != 2) fail(n, "complex literal needs [re, im]");
    return {real_of(n[0]), real_of(n[1])};
  }
  if (n.IsMap()) {
    if (n["modulus"] || n["argument"]) {
      check_keys(n, {"modulus", "argument"}, "polar literal");
      const double m = n["modulus"] ? real_of(n["modulus"]) : 1.0;
      const double a = n["argument"] ? real_of(n["argument"]) : 0.0;
      // Exactly unimodular on the axes, std::polar elsewhere.
      if (a == 0.0) return m;
      return std::polar(m, a);
    }
    check_keys(n, {"re", "im"}, "complex literal");
    return {n["re"] ? real_of(n["re"]) : 0.0, n["im"] ? real_of(n["im"]) : 0.0};
  }
  fail(n, "expected a complex literal");
}

Domain domain_of(const YAML::Node& n) {
  if (n.IsScalar()) {
    if (n.Scalar() == "disk") return Domain::disk();
    fail(n, "domain must be 'disk' or {kind: annulus, r0: ...}");
  }
  check_keys(n, {"kind", "r0"}, "domain");
  if (!n["kind"]) fail(n, "domain: missing 'kind'");
  const std::string k = n["kind"].as<std::string>();
  if (k == "disk") {
    if (n["r0"]) fail(n["r0"], "domain: the disk takes no r0");
    return Domain::disk();
  }
  if (k != "annulus") fail(n["kind"], "domain kind must be disk or annulus");
  if (!n["r0"]) fail(n, "domain: annulus needs r0");
  const double r0 = real_of(n["r0"]);
  if (!(r0 > 0.0 && r0 < 1.0)) fail(n["r0"], "r0 must lie in (0, 1)");
  return Domain::annulus(r0);
}

SymbolSpec symbol_of(const YAML::Node& n) {
  if (!n.IsMap() || !n["builtin"]) fail(n, "symbol: expected a mapping with 'builtin'");
  SymbolSpec s;
  s.builtin = n["builtin"].as<std::string>();
  auto target = [&] {
    if (n["target"]) s.target = domain_of(n["target"]);
  };
  if (s.builtin == "rotation") {
    check_keys(n, {"builtin", "lambda"}, "rotation symbol");
    if (n["lambda"]) s.param = complex_of(n["lambda"]);
  } else if (s.builtin == "inversion") {
    check_keys(n, {"builtin", "mu"}, "inversion symbol");
    if (n["mu"]) s.param = complex_of(n["mu"]);
  } else if (s.builtin == "monomial") {
    check_keys(n, {"builtin", "k", "c", "target"}, "monomial symbol");
    if (!n["k"]) fail(n, "monomial symbol needs k");
    s.k = int_in(n["k"], 1, 64);
    if (n["c"]) s.param = complex_of(n["c"]);
    target();
  } else if (s.builtin == "moebius") {
    check_keys(n, {"builtin", "a"}, "moebius symbol");
    s.param = n["a"] ? complex_of(n["a"]) : cd{};
  } else if (s.builtin == "constant") {
    check_keys(n, {"builtin", "c", "target"}, "constant symbol");
    if (!n["c"]) fail(n, "constant symbol needs c");
    s.param = complex_of(n["c"]);
    target();
  } else if (s.builtin == "series") {
    check_keys(n, {"builtin", "lo", "coefficients", "target"}, "series symbol");
    if (n["lo"]) s.lo = int_in(n["lo"], -1024, 1024);
    const auto& c = n["coefficients"];
    if (!c || !c.IsSequence() || c.size() == 0) fail(n, "series symbol needs a nonempty coefficients list");
    for (const auto& v : c) s.coefficients.push_back(complex_of(v));
    target();
  } else {
    fail(n["builtin"], "unknown builtin symbol '" + s.builtin + "'");
  }
  return s;
}

FieldSpec nu_of(const YAML::Node& n) {
  if (!n.IsMap() || !n["family"]) fail(n, "nu: expected a mapping with 'family'");
  FieldSpec f;
  f.family = n["family"].as<std::string>();
  if (!n["kappa"]) fail(n, "nu: missing kappa");
  f.kappa = real_of(n["kappa"]);
  if (!(f.kappa >= 0.0 && f.kappa < 1.0)) fail(n["kappa"], "kappa must satisfy 0 <= kappa < 1");
  double sup = 0.0;
  if (f.family == "constant" || f.family == "radial") {
    check_keys(n, {"family", "c", "kappa"}, "nu");
    f.c = n["c"] ? real_of(n["c"]) : 0.0;
    sup = std::abs(f.c);
  } else if (f.family == "affine") {
    check_keys(n, {"family", "a", "bx", "by", "kappa"}, "nu");
    f.a = n["a"] ? real_of(n["a"]) : 0.0;
    f.bx = n["bx"] ? real_of(n["bx"]) : 0.0;
    f.by = n["by"] ? real_of(n["by"]) : 0.0;
    sup = std::abs(f.a) + std::hypot(f.bx, f.by);
  } else {
    fail(n["family"], "nu family must be constant, affine or radial");
  }
  if (sup > f.kappa) fail(n, "nu: sup over the closed disk " + std::to_string(sup) + " exceeds kappa");
  return f;
}

FieldSpec alpha_of(const YAML::Node& n) {
  check_keys(n, {"family", "value"}, "alpha");
  FieldSpec f;
  f.family = n["family"] ? n["family"].as<std::string>() : "constant";
  if (f.family != "constant") fail(n["family"], "alpha family must be constant");
  if (!n["value"]) fail(n, "alpha needs value");
  f.value = complex_of(n["value"]);
  return f;
}

// Tolerance names and their slots.
struct TolSlot {
  const char* name;
  double Tolerances::*d = nullptr;
  int Tolerances::*i = nullptr;
};
const std::vector<TolSlot>& tol_slots() {
  static const std::vector<TolSlot> slots = {
      {"roundtrip", &Tolerances::roundtrip},
      {"aliasing_rel", &Tolerances::aliasing_rel},
      {"poisson_boundary", &Tolerances::poisson_boundary},
      {"cauchy_residual", &Tolerances::cauchy_residual},
      {"membership", &Tolerances::membership},
      {"series_tail", &Tolerances::series_tail},
      {"omega_level", &Tolerances::omega_level},
      {"omega_case3", &Tolerances::omega_case3},
      {"richardson", &Tolerances::richardson},
      {"kernel_tail", &Tolerances::kernel_tail},
      {"pde_residual", &Tolerances::pde_residual},
      {"identity", &Tolerances::identity},
      {"boundary_real", &Tolerances::boundary_real},
      {"picard_step", &Tolerances::picard_step},
      {"hard_max_iterations", nullptr, &Tolerances::hard_max_iterations},
      {"dirichlet_max_iterations", nullptr, &Tolerances::dirichlet_max_iterations},
      {"zero_free_floor", &Tolerances::zero_free_floor},
      {"isometry", &Tolerances::isometry},
      {"witness", &Tolerances::witness},
      {"inner_symbol", &Tolerances::inner_symbol},
      {"family_fit", &Tolerances::family_fit},
      {"winding_skip", &Tolerances::winding_skip},
      {"winding_samples", nullptr, &Tolerances::winding_samples},
  };
  return slots;
}

json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}
double num_of(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}
json cjson(cd z) { return json::array({num(z.real()), num(z.imag())}); }

json domain_json(const Domain& d) {
  if (d.is_disk()) return json{{"kind", "disk"}};
  return json{{"kind", "annulus"}, {"r0", d.inner_radius}};
}

// ---------------------------------------------------------------- diagnostics

struct Context {
  const ScenarioConfig& cfg;
  AnalyticSelfMap phi;
  MeshPtr mesh;
  std::optional<NuField> nu;

  AlphaField alpha() const {
    if (nu) return alpha_from_nu(*nu);
    if (cfg.alpha) return AlphaField::constant(mesh, cfg.alpha->value);
    throw PreconditionError("this diagnostic needs nu or alpha in the config");
  }
  void need_disk(const char* what) const {
    if (!cfg.domain.is_disk()) throw PreconditionError(std::string(what) + ": disk domains only");
  }
};

DiagnosticsReport d_isometry(const Context& c) {
  const auto& g = c.cfg;
  if (g.domain.is_disk()) return isometry_check_disk(c.phi, g.p, g.trials, g.seed, g.n_samples, c.nu.has_value(), g.tol);
  return isometry_check_annulus(c.phi, g.p, g.trials, g.seed, g.n_samples, g.tol);
}

DiagnosticsReport d_omega(const Context& c) {
  if (c.cfg.domain.is_disk()) throw PreconditionError("omega: annulus symbols only");
  DiagnosticsReport r;
  const auto om = omega_measures(c.phi, c.cfg.tol.omega_level, 4096, c.cfg.tol.richardson);
  const auto cls = classify_case(om, c.cfg.tol.omega_level, c.cfg.tol.omega_case3);
  const double r0 = c.cfg.domain.inner_radius, rp = std::pow(r0, c.cfg.p);
  r.add("m_r0_on_inner", om.m_r0_on_inner);
  r.add("m_r0_on_outer", om.m_r0_on_outer);
  r.add("m_1_on_inner", om.m_1_on_inner);
  r.add("m_1_on_outer", om.m_1_on_outer);
  r.add("extrapolation_spread", om.extrapolation_spread);
  r.add("identity_defect", std::abs(rp * om.m_r0() + om.m_1() - (rp + 1.0)));
  r.add("case", static_cast<int>(cls));
  r.tol("omega_level", c.cfg.tol.omega_level);
  r.tol("omega_case3", c.cfg.tol.omega_case3);
  r.tol("richardson", c.cfg.tol.richardson);
  r.verdict = om.reliable;
  r.status = case_name(cls);
  if (!om.reliable) r.notes.push_back("boundary extrapolants disagree");
  return r;
}

DiagnosticsReport d_norm_bound(const Context& c) {
  c.need_disk("norm_bound");
  DiagnosticsReport r;
  const double b = norm_bound_disk(c.phi, c.cfg.p);
  r.add("abs_phi0", std::abs(c.phi(0.0)));
  r.add("bound", b);
  r.verdict = std::isfinite(b);
  r.status = "bound computed";
  return r;
}

DiagnosticsReport d_norm_estimate(const Context& c) {
  const auto& g = c.cfg;
  DiagnosticsReport r;
  const auto e = norm_estimate(c.phi, g.p, g.trials, g.seed, g.matrix_size, g.n_samples);
  r.add("estimate", e.estimate);
  r.add("sampled", e.sampled);
  r.add("power_iteration", e.power_iteration);
  r.add("trials", e.trials);
  if (c.nu) r.notes.push_back("estimate is for the analytic space; nu is ignored");
  if (g.domain.is_disk()) {
    const double b = norm_bound_disk(c.phi, g.p);
    constexpr double slack = 1e-6;
    r.add("bound", b);
    r.tol("bound_slack", slack);
    r.verdict = e.estimate <= b + slack;
    r.status = r.verdict ? "estimate within bound" : "estimate exceeds bound";
  } else {
    r.verdict = std::isfinite(e.estimate);
    r.status = "lower bound";
  }
  return r;
}

DiagnosticsReport d_invertibility(const Context& c) { return invertibility_check(c.phi, c.cfg.tol); }

DiagnosticsReport d_matrix(const Context& c) {
  DiagnosticsReport r;
  const auto m = matrix_truncate(c.phi, c.cfg.matrix_size);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.entries);
  const auto& s = svd.singularValues();
  r.add("size", m.size);
  r.add("tail", m.tail);
  r.add("sigma_max", s.size() ? s(0) : 0.0);
  r.series["sigma"].assign(s.data(), s.data() + s.size());
  r.verdict = std::isfinite(m.tail);
  r.status = "truncated";
  return r;
}

DiagnosticsReport d_compact(const Context& c) {
  c.need_disk("compact_proxy");
  cd a{};
  if (c.cfg.alpha) a = c.cfg.alpha->value;
  auto out = compact_proxy(c.phi, c.cfg.matrix_size, a, c.cfg.grid, c.cfg.tol);
  if (c.nu) out.report.notes.push_back("nu given: only constant alpha enters the generalized spectrum; analytic spectrum reported");
  return out.report;
}

DiagnosticsReport d_eval(const Context& c) {
  c.need_disk("eval_functional");
  const auto& g = c.cfg;
  DiagnosticsReport r;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.eval_points.size(); ++i) {
    const cd z = g.eval_points[i];
    const double v = eval_functional_norm(z, g.p, g.eval_modes);
    r.add("norm_" + std::to_string(i), v);
    worst = std::max(worst, std::abs(v - std::pow(1.0 - std::norm(z), -1.0 / g.p)));
  }
  r.add("max_deviation_from_closed_form", worst);
  std::vector<double> zs, vs;
  bool inc = true;
  for (int j = 1; j <= g.eval_sweep; ++j) {
    zs.push_back(1.0 - std::ldexp(1.0, -j));
    vs.push_back(eval_functional_norm(zs.back(), g.p, g.eval_modes));
    if (vs.size() > 1) inc = inc && vs.back() > vs[vs.size() - 2];
  }
  r.series["abs_z"] = zs;
  r.series["norm"] = vs;
  r.add("sweep_increasing", inc ? 1.0 : 0.0);
  if (c.nu) r.notes.push_back("analytic H^p functional; nu is ignored");
  r.verdict = inc;
  r.status = inc ? "sweep increasing" : "sweep not increasing";
  return r;
}

DiagnosticsReport d_adjoint(const Context& c) {
  const Domain& t = c.phi.target();
  const LaurentSeries f = t.is_disk() ? random_polynomial(c.cfg.seed, 0, 12) : random_laurent(c.cfg.seed, 0, t.inner_radius, 8);
  auto r = adjoint_identity_check(c.phi, adjoint_point(c.cfg), HardyFunction(f), c.cfg.n_samples);
  if (c.nu) r.notes.push_back("analytic input; nu is ignored");
  return r;
}

DiagnosticsReport d_factorize(const Context& c) {
  DiagnosticsReport r;
  const auto a = c.alpha();
  const auto h = hard_factorize(PolarGrid::from_function(c.mesh, [](cd) { return cd{1.0}; }), a, c.cfg.tol);
  r.add("alpha_sup", a.sup_norm);
  r.add("iterations", h.iterations);
  r.add("w_residual", h.w_residual);
  r.add("boundary_real_max", h.s.boundary_real_max);
  r.add("s_sup", h.s.sup_norm);
  r.tol("pde_residual", c.cfg.tol.pde_residual);
  r.tol("boundary_real", c.cfg.tol.boundary_real);
  r.tol("hard_max_iterations", c.cfg.tol.hard_max_iterations);
  r.series["history"] = h.history;
  r.verdict = h.w_residual < c.cfg.tol.pde_residual && h.s.boundary_real_max < c.cfg.tol.boundary_real;
  r.status = r.verdict ? "factorized" : "boundary or residual condition not met";
  return r;
}

DiagnosticsReport d_dirichlet(const Context& c) {
  c.need_disk("dirichlet");
  if (!c.nu) throw PreconditionError("dirichlet: the config needs nu");
  DiagnosticsReport r;
  // Boundary data Re phi on T, so nu = 0 reproduces phi.
  const auto psi = CircleGrid::sample(1.0, c.mesh->n_theta(), [&](double t) { return cd{c.phi(std::polar(1.0, t)).real()}; });
  const auto d = dirichlet_disk(psi, *c.nu, c.cfg.tol);
  r.add("iterations", d.iterations);
  r.add("pde_residual", d.f.residual);
  r.add("trace_defect", d.trace_defect);
  r.tol("pde_residual", c.cfg.tol.pde_residual);
  r.tol("identity", c.cfg.tol.identity);
  r.series["history"] = d.history;
  r.verdict = d.f.residual < c.cfg.tol.pde_residual && d.trace_defect < c.cfg.tol.identity;
  r.status = r.verdict ? "solved" : "residual or trace defect too large";
  return r;
}

DiagnosticsReport d_separation(const Context& c) {
  c.need_disk("separation");
  if (!c.nu) throw PreconditionError("separation: the config needs nu");
  DiagnosticsReport r;
  const auto w = separation_witness(c.cfg.witness_z1, c.cfg.witness_z2, *c.nu, c.cfg.tol);
  r.add("abs_f_z1", std::abs(w.f_z1));
  r.add("abs_f_z2", std::abs(w.f_z2));
  r.add("lower_bound", w.lower_bound);
  r.add("w_residual", w.w_residual);
  r.verdict = std::abs(w.f_z2 - w.f_z1) >= w.lower_bound;
  r.status = r.verdict ? "separated" : "below the lower bound";
  return r;
}

struct DiagEntry {
  std::string name;
  DiagnosticsReport (*fn)(const Context&);
  bool classifier;  // a false verdict is an answer, not a failure
};
const std::vector<DiagEntry>& registry() {
  static const std::vector<DiagEntry> r = {
      {"isometry", d_isometry, true},
      {"omega", d_omega, false},
      {"norm_bound", d_norm_bound, false},
      {"norm_estimate", d_norm_estimate, false},
      {"invertibility", d_invertibility, true},
      {"matrix", d_matrix, false},
      {"compact_proxy", d_compact, true},
      {"eval_functional", d_eval, false},
      {"adjoint", d_adjoint, false},
      {"factorize", d_factorize, false},
      {"dirichlet", d_dirichlet, false},
      {"separation", d_separation, false},
  };
  return r;
}

NuField build_nu(const FieldSpec& f, MeshPtr mesh) {
  if (f.family == "constant") return NuField::constant(mesh, f.c, f.kappa);
  if (f.family == "radial") return NuField::radial(mesh, f.c, f.kappa);
  return NuField::affine(mesh, f.a, f.bx, f.by, f.kappa);
}

}  // namespace

const std::vector<std::string>& diagnostic_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : registry()) v.push_back(e.name);
    return v;
  }();
  return names;
}

// ------------------------------------------------------------------- parsing

ScenarioConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ", column " + std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError("config: expected a mapping at the top level");
  check_keys(root, {"domain", "symbol", "nu", "alpha", "p", "grid", "tolerances", "seed", "trials", "n_samples",
                    "matrix_size", "eval", "adjoint", "separation", "diagnostics"},
             "config");
  ScenarioConfig c;
  try {
    if (!root["domain"]) throw ConfigError("config: missing 'domain'");
    c.domain = domain_of(root["domain"]);
    if (!root["symbol"]) throw ConfigError("config: missing 'symbol'");
    c.symbol = symbol_of(root["symbol"]);
    if (root["nu"]) c.nu = nu_of(root["nu"]);
    if (root["alpha"]) c.alpha = alpha_of(root["alpha"]);
    if (c.nu && c.alpha) fail(root["alpha"], "give either nu or alpha, not both");
    if (root["p"]) {
      c.p = real_of(root["p"]);
      if (!(c.p >= 1.0)) fail(root["p"], "p must be >= 1");
    }
    if (const auto g = root["grid"]) {
      check_keys(g, {"n_r", "n_theta"}, "grid");
      if (g["n_r"]) c.grid.n_r = int_in(g["n_r"], 5, 1025);
      if (g["n_theta"]) {
        c.grid.n_theta = int_in(g["n_theta"], 8, 4096);
        if (c.grid.n_theta & (c.grid.n_theta - 1)) fail(g["n_theta"], "grid.n_theta must be a power of two");
      }
    }
    if (const auto t = root["tolerances"]) {
      if (!t.IsMap()) fail(t, "tolerances: expected a mapping");
      for (const auto& kv : t) {
        const std::string k = kv.first.as<std::string>();
        const auto& slots = tol_slots();
        const auto it = std::find_if(slots.begin(), slots.end(), [&](const TolSlot& s) { return k == s.name; });
        if (it == slots.end()) fail(kv.first, "unknown key '" + k + "' in tolerances");
        if (it->d) {
          const double v = real_of(kv.second);
          if (!(v > 0.0)) fail(kv.second, "tolerance must be positive");
          c.tol.*(it->d) = v;
        } else {
          c.tol.*(it->i) = int_in(kv.second, 1, 1 << 20);
        }
      }
    }
    if (root["seed"]) c.seed = static_cast<std::uint64_t>(int_in(root["seed"], 0, std::numeric_limits<int>::max()));
    if (root["trials"]) c.trials = int_in(root["trials"], 1, 100000);
    if (root["n_samples"]) c.n_samples = int_in(root["n_samples"], 16, 1 << 20);
    if (root["matrix_size"]) c.matrix_size = int_in(root["matrix_size"], 2, 1024);
    if (const auto e = root["eval"]) {
      check_keys(e, {"points", "sweep", "modes"}, "eval");
      if (e["points"]) {
        if (!e["points"].IsSequence()) fail(e["points"], "eval.points: expected a list");
        c.eval_points.clear();
        for (const auto& v : e["points"]) {
          const cd z = complex_of(v);
          if (!(std::abs(z) < 1.0)) fail(v, "evaluation point must lie in the open disk");
          c.eval_points.push_back(z);
        }
      }
      if (e["sweep"]) c.eval_sweep = int_in(e["sweep"], 0, 40);
      if (e["modes"]) c.eval_modes = int_in(e["modes"], 2, 4096);
    }
    if (const auto a = root["adjoint"]) {
      check_keys(a, {"point"}, "adjoint");
      if (a["point"]) c.adjoint_point = complex_of(a["point"]);
    }
    if (const auto s = root["separation"]) {
      check_keys(s, {"z1", "z2"}, "separation");
      if (s["z1"]) c.witness_z1 = complex_of(s["z1"]);
      if (s["z2"]) c.witness_z2 = complex_of(s["z2"]);
    }
    const auto d = root["diagnostics"];
    if (!d || !d.IsSequence() || d.size() == 0) throw ConfigError(where(root) + "config: 'diagnostics' must be a nonempty list");
    for (const auto& v : d) {
      const std::string name = v.as<std::string>();
      const auto& names = diagnostic_names();
      if (std::find(names.begin(), names.end(), name) == names.end()) fail(v, "unknown diagnostic '" + name + "'");
      c.diagnostics.push_back(name);
    }
    try {
      (void)build_symbol(c);
    } catch (const ConfigError& e) {
      fail(root["symbol"], e.what());
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(where(root) + e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
}

cd adjoint_point(const ScenarioConfig& cfg) {
  if (cfg.adjoint_point) return *cfg.adjoint_point;
  if (cfg.domain.is_disk()) return {0.3, 0.2};
  return std::polar((1.0 + cfg.domain.inner_radius) / 2, 0.5);
}

AnalyticSelfMap build_symbol(const ScenarioConfig& cfg) {
  const auto& s = cfg.symbol;
  const Domain src = cfg.domain;
  const Domain tgt = s.target.value_or(src);
  try {
    if (s.builtin == "rotation") return AnalyticSelfMap::rotation(src, s.param);
    if (s.builtin == "inversion") {
      if (src.is_disk()) throw PreconditionError("inversion needs an annulus domain");
      return AnalyticSelfMap::inversion(src.inner_radius, s.param);
    }
    if (s.builtin == "monomial") return AnalyticSelfMap::monomial(src, tgt, s.k, s.param);
    if (s.builtin == "moebius") {
      if (!src.is_disk()) throw PreconditionError("moebius needs the disk domain");
      return AnalyticSelfMap::moebius(s.param);
    }
    if (s.builtin == "constant") return AnalyticSelfMap::constant(src, tgt, s.param);
    return AnalyticSelfMap::general(src, tgt, LaurentSeries(src.inner_radius, s.lo, s.coefficients));
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("symbol incompatible with domain: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("symbol incompatible with domain: ") + e.what());
  }
}

json config_echo(const ScenarioConfig& c) {
  json j;
  j["domain"] = domain_json(c.domain);
  json s{{"builtin", c.symbol.builtin}};
  if (c.symbol.builtin == "series") {
    s["lo"] = c.symbol.lo;
    json co = json::array();
    for (cd v : c.symbol.coefficients) co.push_back(cjson(v));
    s["coefficients"] = co;
  } else {
    s["param"] = cjson(c.symbol.param);
  }
  if (c.symbol.builtin == "monomial") s["k"] = c.symbol.k;
  if (c.symbol.target) s["target"] = domain_json(*c.symbol.target);
  j["symbol"] = s;
  if (c.nu) j["nu"] = json{{"family", c.nu->family}, {"c", c.nu->c}, {"a", c.nu->a}, {"bx", c.nu->bx}, {"by", c.nu->by}, {"kappa", c.nu->kappa}};
  if (c.alpha) j["alpha"] = json{{"family", c.alpha->family}, {"value", cjson(c.alpha->value)}};
  j["p"] = c.p;
  j["grid"] = json{{"n_r", c.grid.n_r}, {"n_theta", c.grid.n_theta}};
  json t;
  for (const auto& slot : tol_slots()) {
    if (slot.d) t[slot.name] = c.tol.*(slot.d);
    else t[slot.name] = c.tol.*(slot.i);
  }
  j["tolerances"] = t;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["n_samples"] = c.n_samples;
  j["matrix_size"] = c.matrix_size;
  json pts = json::array();
  for (cd z : c.eval_points) pts.push_back(cjson(z));
  j["eval"] = json{{"points", pts}, {"sweep", c.eval_sweep}, {"modes", c.eval_modes}};
  j["adjoint"] = json{{"point", cjson(adjoint_point(c))}};
  j["separation"] = json{{"z1", cjson(c.witness_z1)}, {"z2", cjson(c.witness_z2)}};
  j["diagnostics"] = c.diagnostics;
  return j;
}

// ---------------------------------------------------------------------- runs

bool RunReport::passed() const {
  return std::none_of(diagnostics.begin(), diagnostics.end(), [](const DiagnosticRun& d) { return d.failed; });
}

RunReport run_scenario(const ScenarioConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  RunReport out;
  out.isa = std::string(kernels::isa_name(kernels::active_isa()));
  out.config = config_echo(cfg);
  Context ctx{cfg, build_symbol(cfg), PolarMesh::make(cfg.domain, cfg.grid), std::nullopt};
  if (cfg.nu) ctx.nu = build_nu(*cfg.nu, ctx.mesh);
  for (const auto& name : cfg.diagnostics) {
    const auto& entry = *std::find_if(registry().begin(), registry().end(), [&](const auto& e) { return e.name == name; });
    DiagnosticRun d;
    const auto t0 = Clock::now();
    try {
      d.report = entry.fn(ctx);
      d.failed = !entry.classifier && !d.report.verdict;
    } catch (const std::exception& e) {
      d.report = DiagnosticsReport{};
      d.report.verdict = false;
      d.report.status = "error";
      d.report.notes.push_back(e.what());
      d.failed = true;
    }
    d.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    d.report.name = name;
    out.diagnostics.push_back(std::move(d));
  }
  return out;
}

RunReport selftest(bool mutate, bool scalar, std::FILE* progress) {
  using Clock = std::chrono::steady_clock;
  if (scalar) kernels::force_isa(kernels::Isa::Scalar);
  detail::set_alpha_sign_mutation(mutate);
  RunReport out;
  out.isa = std::string(kernels::isa_name(kernels::active_isa()));
  out.config = json{{"selftest", true}, {"mutate", mutate}, {"scalar", scalar}};
  for (int id = 1; id <= kCriterionCount; ++id) {
    DiagnosticRun d;
    const auto t0 = Clock::now();
    d.report = run_criterion(id);
    d.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    d.failed = !d.report.verdict;
    if (progress) {
      std::fprintf(progress, "%s  %s (%.1f s)", d.report.verdict ? "PASS" : "FAIL", d.report.name.c_str(), d.seconds);
      for (const auto& n : d.report.notes) std::fprintf(progress, " [%s]", n.c_str());
      std::fputc('\n', progress);
      std::fflush(progress);
    }
    out.diagnostics.push_back(std::move(d));
  }
  detail::set_alpha_sign_mutation(false);
  return out;
}

// -------------------------------------------------------------------- output

json to_json(const RunReport& r) {
  json j;
  j["tool"] = r.tool;
  j["version"] = r.version;
  j["isa"] = r.isa;
  j["config"] = r.config;
  json ds = json::array();
  for (const auto& d : r.diagnostics) {
    json e;
    e["name"] = d.report.name;
    e["verdict"] = d.report.verdict;
    e["status"] = d.report.status;
    json cert = json::array();
    for (const auto& [k, v] : d.report.certificates) cert.push_back(json::array({k, num(v)}));
    e["certificates"] = cert;
    json tol = json::array();
    for (const auto& [k, v] : d.report.tolerances) tol.push_back(json::array({k, num(v)}));
    e["tolerances"] = tol;
    json series = json::object();
    for (const auto& [k, v] : d.report.series) {
      json col = json::array();
      for (double x : v) col.push_back(num(x));
      series[k] = col;
    }
    e["series"] = series;
    e["notes"] = d.report.notes;
    e["failed"] = d.failed;
    e["seconds"] = d.seconds;
    ds.push_back(e);
  }
  j["diagnostics"] = ds;
  j["passed"] = r.passed();
  return j;
}

RunReport report_from_json(const json& j) {
  RunReport r;
  r.tool = j.at("tool").get<std::string>();
  r.version = j.at("version").get<std::string>();
  r.isa = j.at("isa").get<std::string>();
  r.config = j.at("config");
  for (const auto& e : j.at("diagnostics")) {
    DiagnosticRun d;
    d.report.name = e.at("name").get<std::string>();
    d.report.verdict = e.at("verdict").get<bool>();
    d.report.status = e.at("status").get<std::string>();
    for (const auto& kv : e.at("certificates")) d.report.add(kv.at(0).get<std::string>(), num_of(kv.at(1)));
    for (const auto& kv : e.at("tolerances")) d.report.tol(kv.at(0).get<std::string>(), num_of(kv.at(1)));
    for (const auto& [k, col] : e.at("series").items()) {
      auto& v = d.report.series[k];
      for (const auto& x : col) v.push_back(num_of(x));
    }
    d.report.notes = e.at("notes").get<std::vector<std::string>>();
    d.failed = e.at("failed").get<bool>();
    d.seconds = e.at("seconds").get<double>();
    r.diagnostics.push_back(std::move(d));
  }
  return r;
}

bool same_report(const RunReport& a, const RunReport& b) {
  auto strip = [](const RunReport& r) {
    json j = to_json(r);
    for (auto& d : j["diagnostics"]) d.erase("seconds");
    return j.dump();
  };
  return strip(a) == strip(b);
}

EmitFormat parse_format(const std::string& name) {
  if (name == "json") return EmitFormat::Json;
  if (name == "csv") return EmitFormat::Csv;
  if (name == "plot-data") return EmitFormat::PlotData;
  throw ConfigError("unknown format '" + name + "' (json, csv, plot-data)");
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string slug(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (std::isalnum(static_cast<unsigned char>(ch))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    else if (!out.empty() && out.back() != '_') out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

}  // namespace

std::vector<std::filesystem::path> emit(const RunReport& r, EmitFormat format, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  if (format == EmitFormat::Json) {
    const auto p = dir / "report.json";
    open_out(p) << to_json(r).dump(2) << '\n';
    written.push_back(p);
  } else if (format == EmitFormat::Csv) {
    const auto p = dir / "report.csv";
    auto f = open_out(p);
    f << "diagnostic,certificate,value\n";
    for (const auto& d : r.diagnostics) {
      f << csv_field(d.report.name) << ",verdict," << (d.report.verdict ? 1 : 0) << '\n';
      for (const auto& [k, v] : d.report.certificates) f << csv_field(d.report.name) << ',' << csv_field(k) << ',' << fmt(v) << '\n';
    }
    written.push_back(p);
  } else {
    const auto pd = dir / "plot";
    std::filesystem::create_directories(pd, ec);
    if (ec) throw std::runtime_error("cannot create " + pd.string() + ": " + ec.message());
    for (std::size_t i = 0; i < r.diagnostics.size(); ++i) {
      const auto& s = r.diagnostics[i].report.series;
      if (s.empty()) continue;
      char prefix[8];
      std::snprintf(prefix, sizeof prefix, "%02zu_", i + 1);
      const auto p = pd / (prefix + slug(r.diagnostics[i].report.name) + ".csv");
      auto f = open_out(p);
      std::size_t rows = 0;
      bool first = true;
      for (const auto& [k, v] : s) {
        f << (first ? "" : ",") << csv_field(k);
        first = false;
        rows = std::max(rows, v.size());
      }
      f << '\n';
      for (std::size_t row = 0; row < rows; ++row) {
        first = true;
        for (const auto& [k, v] : s) {
          f << (first ? "" : ",");
          if (row < v.size()) f << fmt(v[row]);
          first = false;
        }
        f << '\n';
      }
      written.push_back(p);
    }
  }
  return written;
}

}  // namespace hardy
