#include <doctest.h>

#include <cmath>
#include <random>

#include "hardy/annulus_surface.hpp"
#include "hardy/compop.hpp"
#include "hardy/error.hpp"

using namespace hardy;

namespace {
const Domain D = Domain::disk();
}

TEST_CASE("compose_trace") {
  const HardyFunction z(LaurentSeries::monomial(0.0, 1));
  const auto sq = AnalyticSelfMap::monomial(D, 2);
  const auto t = compose_trace(z, sq, 64);
  for (int k = 0; k < 64; ++k) CHECK(std::abs(t.outer.samples()[k] - std::polar(1.0, 2 * CircleGrid::angle(k, 64))) < 1e-15);
  const auto c = compose_trace(HardyFunction(LaurentSeries::disk({1.0, 2.0})), AnalyticSelfMap::constant(D, 0.25), 16);
  for (cd v : c.outer.samples()) CHECK(std::abs(v - 1.5) < 1e-15);
  const auto A = Domain::annulus(0.5);
  const auto ta = compose_trace(HardyFunction(LaurentSeries::monomial(0.5, -1)), AnalyticSelfMap::rotation(A, 1.0), 32);
  REQUIRE(ta.inner.has_value());
  CHECK(std::abs(ta.inner->samples()[0] - 2.0) < 1e-15);
}

TEST_CASE("norm_bound_disk") {
  CHECK(norm_bound_disk(AnalyticSelfMap::monomial(D, 3), 2) == 1.0);
  CHECK(norm_bound_disk(AnalyticSelfMap::moebius(0.5), 2) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(norm_bound_disk(AnalyticSelfMap::moebius(cd{0, 0.5}), 4) == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-15));
}

TEST_CASE("matrix_truncate") {
  const auto I = matrix_truncate(AnalyticSelfMap::rotation(D, 1.0), 16).entries;
  CHECK((I - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-14);
  const auto S = matrix_truncate(AnalyticSelfMap::monomial(D, 2), 16).entries;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) CHECK(std::abs(S(i, j) - (i == 2 * j ? 1.0 : 0.0)) < 1e-14);
  const auto H = matrix_truncate(AnalyticSelfMap::rotation(D, 0.5), 16).entries;
  for (int j = 0; j < 16; ++j) CHECK(std::abs(H(j, j) - std::pow(0.5, j)) < 1e-15);

  const double r0 = 0.5;
  const auto inv = matrix_truncate(AnalyticSelfMap::inversion(r0, std::polar(1.0, 1.0)), 16);
  CHECK(inv.size == 17);
  const Eigen::MatrixXcd U = inv.entries.adjoint() * inv.entries;
  CHECK((U - Eigen::MatrixXcd::Identity(17, 17)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("norm_estimate") {
  CHECK(std::abs(norm_estimate(AnalyticSelfMap::rotation(D, 1.0), 2, 10).estimate - 1.0) < 1e-10);
  CHECK(std::abs(norm_estimate(AnalyticSelfMap::rotation(D, std::polar(1.0, 0.4)), 4, 10).estimate - 1.0) < 1e-10);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 5; ++i) {
    const cd a = std::polar(0.85 * std::sqrt(u(rng)), kTwoPi * u(rng));
    const auto phi = AnalyticSelfMap::moebius(a);
    for (double p : {2.0, 4.0}) {
      const auto e = norm_estimate(phi, p, 10, i);
      CHECK(e.estimate <= norm_bound_disk(phi, p) + 1e-6);
      CHECK(e.estimate > 1.0);
    }
  }
}

TEST_CASE("isometry_check_disk") {
  for (double p : {2.0, 4.0}) {
    const auto sq = isometry_check_disk(AnalyticSelfMap::monomial(D, 2), p);
    CHECK(sq.verdict);
    CHECK(sq.get("norm_deviation") < 1e-8);
    CHECK(sq.get("mean_identity_deviation") < 1e-8);
    CHECK(sq.notes.empty());
  }
  CHECK(isometry_check_disk(AnalyticSelfMap::rotation(D, std::polar(1.0, 2.0)), 2).verdict);
  const auto m = isometry_check_disk(AnalyticSelfMap::moebius(0.3), 2);
  CHECK_FALSE(m.verdict);
  CHECK(m.get("witness_deviation") > 1e-3);
  CHECK(isometry_check_disk(AnalyticSelfMap::monomial(D, 2), 2, 5, 1, 1024, true).status == "NECESSARY-CONDITIONS-MET");
}

TEST_CASE("isometry_check_annulus") {
  const double r0 = 0.5;
  const auto A = Domain::annulus(r0);
  for (double p : {2.0, 4.0}) {
    const auto rot = isometry_check_annulus(AnalyticSelfMap::rotation(A, std::polar(1.0, kPi / 7)), p);
    CHECK(rot.verdict);
    CHECK(rot.get("norm_deviation") < 1e-8);
    CHECK(rot.get("case") == static_cast<int>(IsometryCase::Case1));
    const auto inv = isometry_check_annulus(AnalyticSelfMap::inversion(r0, std::polar(1.0, 1.0)), p);
    CHECK(inv.verdict);
    CHECK(inv.get("norm_deviation") < 1e-8);
    CHECK(inv.get("case") == static_cast<int>(IsometryCase::Case2));
  }
  const auto c = isometry_check_annulus(AnalyticSelfMap::constant(A, std::sqrt(r0)), 2);
  CHECK_FALSE(c.verdict);
  CHECK(c.get("norm_deviation") > 0.1);
}

TEST_CASE("invertibility_check") {
  const auto rot = invertibility_check(AnalyticSelfMap::rotation(D, std::polar(1.0, 0.3)));
  CHECK(rot.verdict);
  CHECK(rot.get("min_count") == 1);
  CHECK(rot.get("max_count") == 1);
  CHECK(invertibility_check(AnalyticSelfMap::inversion(0.5, std::polar(1.0, 1.0))).verdict);
  CHECK(invertibility_check(AnalyticSelfMap::rotation(Domain::annulus(0.5), cd{0, 1})).verdict);

  CHECK(winding_count(AnalyticSelfMap::monomial(D, 2), 0.25) == 2);
  CHECK(winding_count(AnalyticSelfMap::rotation(D, 0.5), 0.75) == 0);
  const auto sq = invertibility_check(AnalyticSelfMap::monomial(D, 2));
  CHECK_FALSE(sq.verdict);
  CHECK(sq.get("max_count") == 2);
  const auto half = invertibility_check(AnalyticSelfMap::rotation(D, 0.5));
  CHECK(half.get("min_count") == 0);
  // Targets on the image of the boundary are skipped.
  CHECK_FALSE(winding_count(AnalyticSelfMap::rotation(D, 0.5), 0.5).has_value());
}

TEST_CASE("compact_proxy") {
  const auto h = compact_proxy(AnalyticSelfMap::rotation(D, 0.5), 64);
  for (int n = 0; n < 64; ++n) CHECK(std::abs(h.sigma[n] - std::pow(0.5, n)) < 1e-10);
  CHECK(h.report.status == "compact-like");
  const auto sq = compact_proxy(AnalyticSelfMap::monomial(D, 2), 32);
  for (int n = 0; n < 16; ++n) CHECK(sq.sigma[n] >= 0.999);
  CHECK(sq.report.status == "non-compact-like");
  const auto rot = compact_proxy(AnalyticSelfMap::rotation(D, cd{0, 1}), 16);
  for (double s : rot.sigma) CHECK(std::abs(s - 1.0) < 1e-12);

  const auto g = compact_proxy(AnalyticSelfMap::rotation(D, 0.5), 32, 0.3);
  CHECK(g.s_sup > 0.0);
  CHECK(g.report.get("conjugation_violation") == 0.0);
}

TEST_CASE("eval_functional_norm") {
  CHECK(eval_functional_norm(0.0, 2) == doctest::Approx(1.0));
  CHECK(std::abs(eval_functional_norm(0.9, 2, 256) - 2.2942) < 1e-3);
  double prev = 0.0;
  for (int j = 1; j <= 8; ++j) {
    const double v = eval_functional_norm(1.0 - std::ldexp(1.0, -j), 2, 256);
    CHECK(v > prev);
    prev = v;
  }
  // p != 2: the extremal value for H^p is (1 - |z|^2)^{-1/p}.
  CHECK(std::abs(eval_functional_norm(0.5, 4, 64) - std::pow(0.75, -0.25)) < 1e-6);
  CHECK(std::abs(eval_functional_norm(cd{0, 0.3}, 3, 64) - std::pow(0.91, -1.0 / 3)) < 1e-6);
}

TEST_CASE("adjoint_identity_check") {
  const auto r = adjoint_identity_check(AnalyticSelfMap::monomial(D, 2), 0.5, HardyFunction(LaurentSeries::monomial(0.0, 1)));
  CHECK(r.verdict);
  CHECK(r.get("direct_re") == doctest::Approx(0.25));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto phi = AnalyticSelfMap::moebius(cd{u(rng) / 2, u(rng) / 2});
    const cd z{u(rng), u(rng)};
    const auto c = adjoint_identity_check(phi, z, HardyFunction(random_polynomial(11, i, 12)), 2048);
    worst = std::max(worst, c.get("discrepancy_re") + c.get("discrepancy_im"));
  }
  CHECK(worst < 1e-10);

  const double r0 = 0.5;
  const auto A = Domain::annulus(r0);
  for (const auto& phi : {AnalyticSelfMap::rotation(A, std::polar(1.0, 0.4)), AnalyticSelfMap::inversion(r0, cd{0, 1})})
    for (int i = 0; i < 5; ++i) {
      const cd z = std::polar(0.55 + 0.08 * i, 1.3 * i);
      const auto c = adjoint_identity_check(phi, z, HardyFunction(random_laurent(5, i, r0, 8)));
      CHECK(c.verdict);
    }
}
