#include <doctest.h>

#include <cmath>
#include <random>

#include "hardy/annulus_surface.hpp"
#include "hardy/error.hpp"

using namespace hardy;

namespace {

CircleGrid real_samples(double radius, int n, double (*f)(double)) {
  return CircleGrid::sample(radius, n, [f](double t) { return cd{f(t)}; });
}

CircleGrid log_modulus(const AnalyticSelfMap& phi, double r, int n) {
  return CircleGrid::sample(r, n, [&](double t) { return cd{std::log(std::abs(phi(std::polar(r, t))))}; });
}

}  // namespace

TEST_CASE("symbols") {
  const auto A = Domain::annulus(0.5);
  const auto rot = AnalyticSelfMap::rotation(A, std::polar(1.0, kPi / 7));
  CHECK(std::abs(rot(0.7) - std::polar(0.7, kPi / 7)) < 1e-15);
  const auto inv = AnalyticSelfMap::inversion(0.5, std::polar(1.0, 1.0));
  CHECK(std::abs(std::abs(inv(1.0)) - 0.5) < 1e-15);
  CHECK(std::abs(std::abs(inv(0.5)) - 1.0) < 1e-15);
  const auto mob = AnalyticSelfMap::moebius(cd{0.3, -0.2});
  for (cd z : {cd{0.1, 0.2}, cd{-0.5, 0.4}}) {
    CHECK(std::abs(mob(z) - mob.series()(z)) < 1e-14);
    const double h = 1e-6;
    CHECK(std::abs((mob(z + h) - mob(z - h)) / (2 * h) - mob.derivative(z)) < 1e-8);
  }
  CHECK_THROWS_AS(AnalyticSelfMap::rotation(A, 1.2), PreconditionError);
  CHECK_THROWS_AS(AnalyticSelfMap::monomial(A, 2), PreconditionError);  // |z^2| < r0 near the inner circle
  CHECK_NOTHROW(AnalyticSelfMap::monomial(A, Domain::annulus(0.25), 2));
  CHECK_THROWS_AS(AnalyticSelfMap::constant(A, 0.1), PreconditionError);
}

TEST_CASE("lift and index") {
  const double r0 = 0.5;
  const auto A = Domain::annulus(r0);
  const auto id = lift(AnalyticSelfMap::rotation(A, 1.0));
  CHECK(id.index == 0.0);
  CHECK(id.multiplier == cd{1.0});
  CHECK(std::abs(id.values(3, 5) - std::polar(id.radii[3], id.t(5))) < 1e-15);
  CHECK(id.automorphy_defect() < 1e-10);
  const auto c = lift(AnalyticSelfMap::constant(A, 0.7));
  CHECK(c.values.cwiseAbs().maxCoeff() == doctest::Approx(0.7));
  const auto sq = lift(AnalyticSelfMap::monomial(A, Domain::annulus(r0 * r0), 2));
  CHECK(std::abs(sq.values(2, 7) - std::polar(sq.radii[2] * sq.radii[2], 2 * sq.t(7))) < 1e-15);

  for (int k = 0; k <= 3; ++k) {
    const auto lo = CircleGrid::sample(1.0, 64, [](double) { return cd{}; });
    const auto li = CircleGrid::sample(r0, 64, [&](double) { return cd{k * std::log(r0)}; });
    CHECK(index_distance_to_zero(index_of(lo, li, r0)) < 1e-10);
  }
  CHECK(index_of(real_samples(1.0, 32, [](double) { return 0.3; }), real_samples(0.5, 32, [](double) { return 0.3; }), 0.5) == 0.0);

  // Index is additive on products.
  const auto lfo = real_samples(1.0, 64, [](double t) { return 0.2 * std::cos(t) + 0.1; });
  const auto lfi = real_samples(0.5, 64, [](double t) { return -0.3 + 0.1 * std::sin(t); });
  const auto lgo = real_samples(1.0, 64, [](double) { return 0.4; });
  const auto lgi = real_samples(0.5, 64, [](double t) { return 0.05 * std::cos(2 * t); });
  std::vector<cd> po(64), pi(64);
  for (int j = 0; j < 64; ++j) {
    po[j] = lfo.samples()[j] + lgo.samples()[j];
    pi[j] = lfi.samples()[j] + lgi.samples()[j];
  }
  const double sum = index_of(lfo, lfi, 0.5) + index_of(lgo, lgi, 0.5);
  CHECK(index_distance_to_zero(index_of(CircleGrid(1.0, po), CircleGrid(0.5, pi), 0.5) - sum) < 1e-12);
}

TEST_CASE("sarason kernel") {
  const double r0 = 0.3, q0 = -std::log(r0);
  CHECK(sarason_K(std::sqrt(r0), 0.0, r0) == doctest::Approx(1.0 / q0).epsilon(1e-15));
  for (double r : {0.35, 0.6, 0.95})
    for (double t : {0.1, 1.0, 4.0}) {
      CHECK(sarason_K(r, t, r0) == sarason_K(r, -t, r0));
      CHECK(std::abs(sarason_K(r, t, r0) - sarason_K_rewritten(r, t, r0)) < 1e-12);
      CHECK(sarason_K(r, t, r0) > 0.0);
    }
  CHECK_THROWS_AS((void)sarason_K(0.2, 0.0, r0), DomainError);
  // Closed form of the line integral of the printed kernel over both boundaries is 2.
  for (double r : {0.4, 0.55, 0.9}) CHECK(std::abs(sarason_K_mass(r, r0) - 2.0) < 1e-10);
}

TEST_CASE("harmonic_ext_annulus") {
  const double r0 = 0.5;
  const int n = 64;
  const BoundaryDensity zero{real_samples(1.0, n, [](double) { return 0.0; }), real_samples(r0, n, [](double) { return 0.0; })};
  CHECK(harmonic_ext_annulus(zero, r0).U.max_abs() == 0.0);

  const BoundaryDensity one{real_samples(1.0, n, [](double) { return 1.0; }), real_samples(r0, n, [](double) { return 1.0; })};
  const auto u1 = harmonic_ext_annulus(one, r0);
  CHECK((u1.U.values.array() - 1.0).abs().maxCoeff() < 1e-6);
  CHECK(std::abs(harmonic_ext_point(one, r0, 0.7, 1.0) - 1.0) < 1e-6);

  const BoundaryDensity lnr{real_samples(1.0, n, [](double) { return 0.0; }),
                            CircleGrid::sample(r0, n, [&](double) { return cd{std::log(r0)}; })};
  const auto ul = harmonic_ext_annulus(lnr, r0);
  double err = 0.0;
  for (int i = 0; i < ul.U.n_r(); ++i) err = std::max(err, (ul.U.values.row(i).array() - std::log(ul.U.mesh->radius(i))).abs().maxCoeff());
  CHECK(err < 1e-6);
  CHECK(std::abs(harmonic_ext_point(lnr, r0, 0.8, 2.0) - std::log(0.8)) < 1e-6);

  // Smooth data: spectral extension, kernel quadrature and Laplacian agree.
  const BoundaryDensity smooth{real_samples(1.0, n, [](double t) { return std::cos(t) + 0.3 * std::sin(3 * t); }),
                               real_samples(r0, n, [](double t) { return 0.5 - 0.2 * std::cos(2 * t); })};
  const auto us = harmonic_ext_annulus(smooth, r0);
  CHECK(us.laplacian_residual < 1e-5);
  for (double r : {0.6, 0.75, 0.9})
    for (double t : {0.0, 0.7, 2.9}) CHECK(std::abs(us.U.evaluate(std::polar(r, t)).real() - harmonic_ext_point(smooth, r0, r, t)) < 1e-8);
}

TEST_CASE("outer_annulus") {
  const double r0 = 0.5;
  const int n = 64;
  const auto zo = real_samples(1.0, n, [](double) { return 0.0; });
  const auto zi = real_samples(r0, n, [](double) { return 0.0; });
  const auto F1 = outer_annulus(zo, zi, r0);
  CHECK(F1.F.index == 0.0);
  CHECK((F1.F.values.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-14);

  // Moduli of the lift of z.
  const auto li = CircleGrid::sample(r0, n, [&](double) { return cd{std::log(r0)}; });
  const auto Fz = outer_annulus(zo, li, r0);
  CHECK(index_distance_to_zero(Fz.F.index) < 1e-12);
  for (double r : {0.55, 0.7, 0.95})
    for (double t : {0.3, 5.0, 8.0}) {
      CHECK(std::abs(std::abs(Fz.eval(r, t)) - r) < 1e-12);
      CHECK(std::abs(std::abs(Fz.eval(r, t) / std::polar(r, t)) - 1.0) < 1e-12);
    }

  // Piecewise data: 1 on an arc of the outer line, 1/2 elsewhere.
  const ArcSet B0{{{0.5, 2.0}}};
  const auto lo = CircleGrid::sample(1.0, 256, [&](double t) { return cd{B0.contains(t) ? 0.0 : std::log(0.5)}; });
  const auto lin = CircleGrid::sample(r0, 256, [&](double) { return cd{std::log(0.5)}; });
  const auto Fp = outer_annulus(lo, lin, r0);
  CHECK(Fp.boundary_defect < 1e-6);
  CHECK(Fp.F.values.cwiseAbs().minCoeff() > 0.0);
  CHECK(Fp.F.automorphy_defect() < 1e-10);
  // Index equals the log-modulus mean difference.
  CHECK(std::abs(Fp.F.index - index_of(lo, lin, r0)) < 1e-12);
  CHECK(std::abs(std::abs(Fp.F.multiplier) - 1.0) < 1e-15);
}

TEST_CASE("omega measures and cases") {
  const double r0 = 0.5;
  const auto A = Domain::annulus(r0);
  const auto id = omega_measures(AnalyticSelfMap::rotation(A, 1.0), 1e-4);
  CHECK(id.reliable);
  CHECK(id.m_1_on_outer == 1.0);
  CHECK(id.m_r0_on_inner == 1.0);
  CHECK(id.m_1_on_inner == 0.0);
  CHECK(id.m_r0_on_outer == 0.0);
  CHECK(classify_case(id, 1e-4) == IsometryCase::Case1);

  const auto inv = omega_measures(AnalyticSelfMap::inversion(r0, 1.0), 1e-4);
  CHECK(inv.reliable);
  CHECK(inv.m_1_on_inner == 1.0);
  CHECK(inv.m_r0_on_outer == 1.0);
  CHECK(classify_case(inv, 1e-4) == IsometryCase::Case2);

  const auto lam = omega_measures(AnalyticSelfMap::rotation(A, std::polar(1.0, 2.0)), 1e-4);
  CHECK(std::abs(r0 * r0 * lam.m_r0() + lam.m_1() - (r0 * r0 + 1.0)) < 1e-8);

  const auto c = omega_measures(AnalyticSelfMap::constant(A, 0.7), 1e-4);
  CHECK(c.m_r0() == 0.0);
  CHECK(c.m_1() == 0.0);
  CHECK(classify_case(c, 1e-4) == IsometryCase::NotIsometryCandidate);

  OmegaMeasures half;
  half.m_r0_on_inner = 0.5;
  half.m_r0_on_outer = 0.5;
  CHECK(classify_case(half, 1e-4) == IsometryCase::Case3);
}
