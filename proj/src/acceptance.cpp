#include "hardy/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <stdexcept>

#include "hardy/annulus_surface.hpp"
#include "hardy/beltrami.hpp"

namespace hardy {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double max_diff(const PolarGrid& a, const PolarGrid& b) { return (a.values - b.values).cwiseAbs().maxCoeff(); }

// Fails the report unless value < bound; records both.
void below(DiagnosticsReport& r, const std::string& key, double value, double bound) {
  r.add(key, value);
  r.tol(key, bound);
  if (!(value < bound)) {
    r.verdict = false;
    r.notes.push_back(key + " not below tolerance");
  }
}

void require(DiagnosticsReport& r, const std::string& what, bool ok) {
  if (!ok) {
    r.verdict = false;
    r.notes.push_back(what);
  }
}

cd random_in_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rho = radius * std::sqrt(u(rng));
  return std::polar(rho, kTwoPi * u(rng));
}

// ---------------------------------------------------------------------------

DiagnosticsReport forelli(DiagnosticsReport r) {
  const auto t0 = Clock::now();
  const auto sq = AnalyticSelfMap::monomial(Domain::disk(), 2);
  double dev = 0.0;
  for (double p : {2.0, 4.0}) {
    const auto c = isometry_check_disk(sq, p, 20, 2024, 1024);
    dev = std::max(dev, c.get("norm_deviation"));
    require(r, "z^2 not reported as an isometry", c.verdict);
  }
  below(r, "norm_deviation", dev, 1e-8);
  below(r, "seconds", seconds_since(t0), 5.0);
  return r;
}

DiagnosticsReport annulus_isometries(DiagnosticsReport r) {
  const double r0 = 0.5;
  const auto A = Domain::annulus(r0);
  double dev = 0.0;
  for (double p : {2.0, 4.0}) {
    const auto rot = isometry_check_annulus(AnalyticSelfMap::rotation(A, std::polar(1.0, kPi / 7)), p);
    const auto inv = isometry_check_annulus(AnalyticSelfMap::inversion(r0, std::polar(1.0, 1.0)), p);
    dev = std::max({dev, rot.get("norm_deviation"), inv.get("norm_deviation")});
    require(r, "rotation not classified Case1", rot.get("case") == static_cast<int>(IsometryCase::Case1));
    require(r, "inversion not classified Case2", inv.get("case") == static_cast<int>(IsometryCase::Case2));
    require(r, "rotation or inversion rejected", rot.verdict && inv.verdict);
  }
  below(r, "norm_deviation", dev, 1e-8);
  const auto c = isometry_check_annulus(AnalyticSelfMap::constant(A, std::sqrt(r0)), 2);
  require(r, "constant symbol accepted", !c.verdict);
  r.add("constant_deviation", c.get("norm_deviation"));
  r.tol("constant_deviation_min", 0.05);
  require(r, "constant symbol deviation too small", c.get("norm_deviation") > 0.05);
  return r;
}

DiagnosticsReport norm_bound(DiagnosticsReport r) {
  std::mt19937_64 rng(3);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    const auto phi = AnalyticSelfMap::moebius(random_in_disk(rng, 0.9));
    for (double p : {2.0, 4.0}) {
      const double e = norm_estimate(phi, p, 40, static_cast<std::uint64_t>(i)).estimate;
      worst = std::max(worst, e - norm_bound_disk(phi, p));
    }
  }
  // estimate - bound, must stay under the slack.
  below(r, "max_excess", worst, 1e-6);
  return r;
}

DiagnosticsReport trace_relation(DiagnosticsReport r) {
  double worst = 0.0;
  for (double r0 : {0.3, 0.5, 0.7})
    for (int k = -20; k <= 20; ++k) {
      const auto t = AnnulusTrace::sample(r0, 64, [k](cd z) { return std::pow(z, k); });
      worst = std::max(worst, annulus_membership(t, 1e-12).defect);
    }
  below(r, "membership_defect", worst, 1e-12);
  return r;
}

DiagnosticsReport sarason(DiagnosticsReport r) {
  const double r0 = 0.3, q0 = -std::log(r0);
  double agree = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double rad = r0 + (1.0 - r0) * (i + 0.5) / 100;
    for (int j = 0; j < 100; ++j) {
      const double t = -kPi + kTwoPi * (j + 0.5) / 100;
      agree = std::max(agree, std::abs(sarason_K(rad, t, r0) - sarason_K_rewritten(rad, t, r0)));
    }
  }
  below(r, "form_agreement", agree, 1e-12);
  double mass = 0.0;
  for (double rad : {0.4, 0.55, 0.9}) mass = std::max(mass, std::abs(sarason_K_mass(rad, r0) - 1.0));
  below(r, "normalization_defect", mass, 1e-6);
  const double centre = std::abs(sarason_K(std::sqrt(r0), 0.0, r0) - 1.0 / q0);
  below(r, "centre_value_defect", centre, 4 * std::numeric_limits<double>::epsilon() / q0);
  return r;
}

DiagnosticsReport index_formula(DiagnosticsReport r) {
  const double r0 = 0.5;
  const int n = 64;
  double worst = 0.0;
  for (int k = 0; k <= 3; ++k) {
    const auto lo = CircleGrid::sample(1.0, n, [](double) { return cd{}; });
    const auto li = CircleGrid::sample(r0, n, [&](double) { return cd{k * std::log(r0)}; });
    worst = std::max(worst, index_distance_to_zero(index_of(lo, li, r0)));
    worst = std::max(worst, index_distance_to_zero(outer_annulus(lo, li, r0).F.index));
    if (k > 0) {
      const auto zk = AnalyticSelfMap::monomial(Domain::annulus(r0), Domain::annulus(std::pow(r0, k)), k);
      worst = std::max(worst, index_distance_to_zero(lift(zk).index));
    }
  }
  below(r, "index_frac", worst, 1e-10);
  return r;
}

DiagnosticsReport factorization(DiagnosticsReport r) {
  double iters = 0, wres = 0, ratio = 0, ident = 0;
  for (const MeshPtr& m : {PolarMesh::make(Domain::disk(), {65, 64}), PolarMesh::make(Domain::annulus(0.5), {33, 64})}) {
    const auto F = PolarGrid::from_function(m, [](cd z) { return 1.0 + z / 2.0; });
    const AlphaField alphas[] = {
        AlphaField::constant(m, 0.3),
        AlphaField::from_grid(PolarGrid::from_function(m, [](cd z) { return 0.3 * std::polar(1.0, z.real()) * (0.5 + 0.5 * z.imag()); })),
        AlphaField::from_grid(PolarGrid::from_function(m, [](cd z) { return cd{0, 0.2} * z * z; })),
    };
    double breal = 0.0;
    for (const auto& a : alphas) {
      const auto h = hard_factorize(F, a);
      iters = std::max(iters, static_cast<double>(h.iterations));
      wres = std::max(wres, h.w_residual);
      breal = std::max(breal, h.s.boundary_real_max);
      ratio = std::max(ratio, h.s.sup_norm / a.sup_norm);
      for (const auto& a2 : alphas) {
        if (&a2 == &a) continue;
        ident = std::max(ident, refactor_alpha(make_w(h.w, a), a, a2).identity_defect);
      }
    }
    below(r, m->domain().is_disk() ? "boundary_real_disk" : "boundary_real_annulus", breal, 1e-8);
  }
  r.add("iterations", iters);
  r.tol("max_iterations", 200);
  require(r, "too many iterations", iters <= 200);
  below(r, "w_residual", wres, 1e-6);
  r.add("s_over_alpha", ratio);
  r.tol("s_over_alpha_max", 4.0);
  require(r, "||s|| exceeds 4 ||alpha||", ratio <= 4.0);
  below(r, "refactor_identity", ident, 1e-8);
  return r;
}

DiagnosticsReport j_diagram(DiagnosticsReport r) {
  const MeshPtr m = PolarMesh::make(Domain::disk(), {65, 64});
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double trip = 0, diagram = 0, wres = 0;
  for (int i = 0; i < 10; ++i) {
    const double kappa = 0.3;
    const NuField nu = (i % 2 == 0) ? NuField::radial(m, kappa * u(rng), kappa)
                                    : NuField::affine(m, 0.1 * u(rng), 0.1 * u(rng), 0.1 * u(rng), kappa);
    const double b = 0.3 * u(rng);
    const auto psi = CircleGrid::sample(1.0, 64, [b](double t) { return cd{std::cos(t) + b * std::sin(2 * t)}; });
    const auto f = dirichlet_disk(psi, nu).f;
    const auto w = jmap(f, nu);
    wres = std::max(wres, w.residual);
    trip = std::max(trip, max_diff(jinv(w, nu).values, f.values));

    const auto phi = AnalyticSelfMap::moebius(random_in_disk(rng, 0.5));
    const auto nu_phi = compose_nu(nu, phi, m);
    const auto lhs = jmap(make_f(compose_grid(f.values, phi, m), nu_phi), nu_phi);
    diagram = std::max(diagram, max_diff(lhs.values, compose_grid(w.values, phi, m)));
  }
  below(r, "round_trip", trip, 1e-12);
  below(r, "diagram", diagram, 1e-10);
  // J f must solve the w-equation with alpha computed from nu.
  below(r, "w_residual", wres, 1e-6);
  return r;
}

DiagnosticsReport compactness(DiagnosticsReport r) {
  const auto half = compact_proxy(AnalyticSelfMap::rotation(Domain::disk(), 0.5), 64);
  double dev = 0.0;
  for (int n = 0; n < 64; ++n) dev = std::max(dev, std::abs(half.sigma[n] - std::ldexp(1.0, -n)));
  below(r, "half_sigma_error", dev, 1e-10);
  const auto sq = compact_proxy(AnalyticSelfMap::monomial(Domain::disk(), 2), 64);
  double lo = 1.0;
  for (int n = 0; n < 16; ++n) lo = std::min(lo, sq.sigma[n]);
  r.add("square_sigma_min16", lo);
  r.tol("square_sigma_floor", 0.999);
  require(r, "z^2 singular values below 0.999", lo >= 0.999);
  const auto g = compact_proxy(AnalyticSelfMap::rotation(Domain::disk(), 0.5), 64, 0.3);
  r.add("s_sup", g.s_sup);
  // Relative amount by which a conjugated singular value leaves [a e^{-s}, a e^{s}].
  r.add("conjugation_violation", g.report.get("conjugation_violation"));
  r.tol("conjugation_violation", 0.0);
  require(r, "conjugated spectrum outside e^{||s||} band", g.report.get("conjugation_violation") <= 0.0);
  r.series["sigma"] = half.sigma;
  return r;
}

DiagnosticsReport eval_functionals(DiagnosticsReport r) {
  double dev = 0.0;
  for (double x : {0.0, 0.5, 0.9}) dev = std::max(dev, std::abs(eval_functional_norm(x, 2, 256) - szego_eval_bound(x)));
  below(r, "szego_deviation", dev, 1e-3);
  std::vector<double> zs, vs;
  for (int j = 1; j <= 8; ++j) {
    zs.push_back(1.0 - std::ldexp(1.0, -j));
    vs.push_back(eval_functional_norm(zs.back(), 2, 256));
  }
  bool inc = true;
  for (std::size_t j = 1; j < vs.size(); ++j) inc = inc && vs[j] > vs[j - 1];
  r.add("sweep_increasing", inc ? 1.0 : 0.0);
  require(r, "sweep not strictly increasing", inc);
  r.series["abs_z"] = zs;
  r.series["norm"] = vs;
  return r;
}

DiagnosticsReport eq1(DiagnosticsReport r) {
  const double r0 = 0.5;
  const auto A = Domain::annulus(r0);
  const AnalyticSelfMap symbols[] = {
      AnalyticSelfMap::rotation(A, 1.0),
      AnalyticSelfMap::rotation(A, std::polar(1.0, kPi / 7)),
      AnalyticSelfMap::rotation(A, std::polar(1.0, 2.0)),
      AnalyticSelfMap::rotation(A, -1.0),
      AnalyticSelfMap::inversion(r0, 1.0),
      AnalyticSelfMap::inversion(r0, std::polar(1.0, 1.0)),
      AnalyticSelfMap::inversion(r0, std::polar(1.0, -2.5)),
  };
  double worst = 0.0;
  for (const auto& phi : symbols) {
    const auto om = omega_measures(phi, Tolerances{}.omega_level);
    worst = std::max(worst, std::abs(r0 * r0 * om.m_r0() + om.m_1() - (r0 * r0 + 1.0)));
  }
  below(r, "identity_defect", worst, 1e-8);
  return r;
}

DiagnosticsReport dirichlet(DiagnosticsReport r) {
  const MeshPtr m = PolarMesh::make(Domain::disk(), {65, 64});
  const auto cos_t = CircleGrid::sample(1.0, 64, [](double t) { return cd{std::cos(t)}; });
  const auto d0 = dirichlet_disk(cos_t, NuField::constant(m, 0.0, 0.2));
  below(r, "recover_z", max_diff(d0.f.values, PolarGrid::from_function(m, [](cd z) { return z; })), 1e-10);
  const auto d = dirichlet_disk(cos_t, NuField::radial(m, 0.2, 0.2));
  below(r, "pde_residual", d.f.residual, 1e-6);
  below(r, "trace_defect", d.trace_defect, 1e-8);
  r.add("iterations", d.iterations);
  r.tol("max_iterations", 100);
  require(r, "too many iterations", d.iterations <= 100);
  return r;
}

DiagnosticsReport invertibility(DiagnosticsReport r) {
  const auto A = Domain::annulus(0.5);
  const AnalyticSelfMap ones[] = {
      AnalyticSelfMap::rotation(Domain::disk(), std::polar(1.0, 0.3)),
      AnalyticSelfMap::rotation(A, cd{0, 1}),
      AnalyticSelfMap::inversion(0.5, std::polar(1.0, 1.0)),
  };
  double lo = 1e9, hi = -1e9;
  for (const auto& phi : ones) {
    const auto c = invertibility_check(phi);
    lo = std::min(lo, c.get("min_count"));
    hi = std::max(hi, c.get("max_count"));
  }
  r.add("unit_min_count", lo);
  r.add("unit_max_count", hi);
  require(r, "a rotation or inversion has a count other than 1", lo == 1 && hi == 1);
  const double sq = invertibility_check(AnalyticSelfMap::monomial(Domain::disk(), 2)).get("max_count");
  r.add("square_max_count", sq);
  require(r, "no count of 2 for z^2", sq == 2);
  const double half = invertibility_check(AnalyticSelfMap::rotation(Domain::disk(), 0.5)).get("min_count");
  r.add("half_min_count", half);
  require(r, "no count of 0 for z/2", half == 0);
  return r;
}

}  // namespace

std::string criterion_title(int id) {
  static const char* titles[kCriterionCount] = {
      "Forelli isometry on the disk",
      "annulus isometries",
      "composition norm bound",
      "annulus trace relation",
      "Sarason kernel",
      "index of lifted monomials",
      "factorization suite",
      "J isomorphism and diagram",
      "compactness proxy",
      "evaluation functionals",
      "Omega measure identity",
      "Dirichlet solve",
      "invertibility counts",
  };
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("no criterion " + std::to_string(id));
  return titles[id - 1];
}

DiagnosticsReport run_criterion(int id) {
  DiagnosticsReport r;
  r.name = "criterion " + std::to_string(id) + ": " + criterion_title(id);
  r.verdict = true;
  using Fn = DiagnosticsReport (*)(DiagnosticsReport);
  static const Fn fns[kCriterionCount] = {forelli,     annulus_isometries, norm_bound,       trace_relation, sarason,
                                          index_formula, factorization,   j_diagram,        compactness,    eval_functionals,
                                          eq1,         dirichlet,          invertibility};
  try {
    r = fns[id - 1](std::move(r));
  } catch (const std::exception& e) {
    r.verdict = false;
    r.notes.push_back(std::string("exception: ") + e.what());
  }
  r.status = r.verdict ? "pass" : "fail";
  return r;
}

}  // namespace hardy
