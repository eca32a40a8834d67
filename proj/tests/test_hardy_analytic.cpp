#include <doctest.h>

#include <cmath>
#include <random>

#include "hardy/error.hpp"
#include "hardy/hardy_analytic.hpp"

using namespace hardy;

TEST_CASE("hardy_project_disk") {
  FourierCoeffs c(1.0, 16);
  c[-1] = 1.0;
  c[0] = 1.0;
  c[1] = 1.0;
  const auto p = hardy_project_disk(c);
  CHECK(p[-1] == cd{});
  CHECK(p[0] == cd{1.0});
  CHECK(p[1] == cd{1.0});
  const auto pp = hardy_project_disk(p);
  for (int n = p.min_index(); n <= p.max_index(); ++n) CHECK(pp[n] == p[n]);
  CHECK(p.l2_norm() <= c.l2_norm());
}

TEST_CASE("annulus_split") {
  const double r0 = 0.5;
  auto z = LaurentSeries::monomial(r0, 1);
  auto zi = LaurentSeries::monomial(r0, -1);
  auto s1 = annulus_split(z);
  CHECK(s1.disk_part[1] == cd{1.0});
  CHECK(s1.outer_part.empty());
  auto s2 = annulus_split(zi);
  CHECK(s2.disk_part.empty());
  CHECK(s2.outer_part[-1] == cd{1.0});
  const auto both = z + zi;
  auto s3 = annulus_split(both);
  CHECK(s3.disk_part[1] == cd{1.0});
  CHECK(s3.disk_part[-1] == cd{});
  CHECK(s3.outer_part[-1] == cd{1.0});
  CHECK(s3.outer_part[1] == cd{});
  const auto back = s3.disk_part + s3.outer_part;
  for (int n = -3; n <= 3; ++n) CHECK(back[n] == both[n]);
}

TEST_CASE("annulus_membership on Laurent monomials") {
  for (double r0 : {0.3, 0.5, 0.7})
    for (int k = -20; k <= 20; ++k) {
      CAPTURE(r0);
      CAPTURE(k);
      const auto t = AnnulusTrace::sample(r0, 64, [k](cd z) { return std::pow(z, k); });
      const auto m = annulus_membership(t, 1e-12);
      CHECK(m.member);
      CHECK(m.defect < 1e-12);
    }
  const auto t = AnnulusTrace::sample(0.5, 64, [](cd z) { return z + 1.0 / z; });
  CHECK(annulus_membership(t, 1e-12).member);

  AnnulusTrace broken(CircleGrid::sample(1.0, 64, [](double s) { return std::polar(1.0, s); }),
                      CircleGrid(0.5, std::vector<cd>(64)));
  const auto m = annulus_membership(broken, 1e-12);
  CHECK_FALSE(m.member);
  CHECK(m.defect == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("boundary_norm") {
  const auto c = CircleGrid::sample(1.0, 32, [](double) { return cd{0.0, 3.0}; });
  CHECK(boundary_norm(c, 2.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(boundary_norm(c, 3.5) == doctest::Approx(3.0).epsilon(1e-14));
  const auto oz = CircleGrid::sample(1.0, 32, [](double t) { return 1.0 + std::polar(1.0, t); });
  CHECK(std::abs(boundary_norm(oz, 2.0) - std::sqrt(2.0)) < 1e-12);
  const auto tz = AnnulusTrace::sample(0.5, 32, [](cd z) { return z; });
  CHECK(std::abs(boundary_norm(tz, 2.0) - std::sqrt(1.25)) < 1e-12);

  // Parseval on a random trigonometric polynomial.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  FourierCoeffs f(1.0, 64);
  for (int n = -10; n <= 10; ++n) f[n] = {u(rng), u(rng)};
  CHECK(std::abs(boundary_norm(synthesize(f, 64), 2.0) - f.l2_norm()) < 1e-12);
  CHECK_THROWS_AS((void)boundary_norm(c, 1.0), std::invalid_argument);
}

TEST_CASE("eval_interior") {
  CHECK(std::abs(eval_interior(LaurentSeries::monomial(0.0, 2), 0.5).value - 0.25) < 1e-15);
  CHECK(std::abs(eval_interior(LaurentSeries::monomial(0.3, -1), 0.5).value - 2.0) < 1e-15);
  CHECK_THROWS_AS((void)eval_interior(LaurentSeries::monomial(0.3, -1), 0.2), DomainError);
  CHECK_THROWS_AS((void)eval_interior(LaurentSeries::monomial(0.0, 1), 1.0), DomainError);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<cd> c(25);
  for (auto& v : c) v = {u(rng), u(rng)};
  const auto f = LaurentSeries::disk(c);
  for (int j = 0; j < 10; ++j) {
    const cd z{0.6 * u(rng), 0.6 * u(rng)};
    cd direct{};
    for (int n = 24; n >= 0; --n) direct = direct * z + c[static_cast<std::size_t>(n)];
    CHECK(std::abs(eval_interior(f, z).value - direct) < 1e-13);
  }
}

TEST_CASE("outer_disk from sampled log-modulus") {
  const auto zero = CircleGrid::sample(1.0, 64, [](double) { return cd{}; });
  const auto F0 = outer_disk(zero);
  CHECK(std::abs(F0(cd{0.3, 0.4}) - 1.0) < 1e-14);
  const auto one = CircleGrid::sample(1.0, 64, [](double) { return cd{1.0}; });
  const auto F1 = outer_disk(one);
  CHECK(std::abs(F1(cd{-0.2, 0.1}) - std::exp(1.0)) < 1e-13);
  CHECK(std::abs(F1.series()[0] - std::exp(1.0)) < 1e-13);

  // Smooth data: boundary modulus reproduced, zero-free inside.
  auto h = [](double t) { return 0.4 * std::cos(t) - 0.3 * std::sin(3 * t) + 0.1; };
  const auto g = CircleGrid::sample(1.0, 128, [&](double t) { return cd{h(t)}; });
  const auto F = outer_disk(g);
  double rel = 0.0;
  for (int k = 0; k < 128; ++k) {
    const double t = CircleGrid::angle(k, 128);
    const double target = std::exp(h(t));
    rel = std::max(rel, std::abs(std::abs(F(std::polar(1.0, t))) - target) / target);
    rel = std::max(rel, std::abs(std::abs(F.series()(std::polar(1.0, t))) - target) / target);
  }
  CHECK(rel < 1e-6);
  double fmin = 1e300;
  for (double r = 0.0; r < 1.0; r += 0.1)
    for (int k = 0; k < 32; ++k) fmin = std::min(fmin, std::abs(F(std::polar(r, CircleGrid::angle(k, 32)))));
  CHECK(fmin > 0.0);
}

TEST_CASE("outer_disk from arc data") {
  // |g| = 1 on an arc of normalized measure 1/4, 1/2 elsewhere.
  const Arc arc{0.3, 0.3 + kPi / 2.0};
  const auto F = outer_disk(std::log(0.5), {{arc, -std::log(0.5)}});
  CHECK(std::abs(std::abs(F(0.0)) - std::exp(0.75 * std::log(0.5))) < 1e-12);
  CHECK(std::abs(std::abs(F(0.0)) - 0.5946035575) < 1e-9);
  for (int k = 0; k < 200; ++k) {
    const double t = kTwoPi * (k + 0.5) / 200;
    const ArcSet s{{arc}};
    const double target = s.contains(t) ? 1.0 : 0.5;
    CHECK(std::abs(std::abs(F(std::polar(1.0, t))) - target) < 1e-6);
  }
  // Closed form vs. the series in the interior.
  CHECK(std::abs(F(cd{0.3, -0.2}) - F.series()(cd{0.3, -0.2})) < 1e-9);
}

TEST_CASE("least_power and annulus_defF") {
  CHECK(least_power(0.5, 4.0) == 4);
  CHECK(least_power(0.5, 0.4) == 0);
  CHECK(least_power(0.5, 1.0) == 2);

  const ArcSet B0{{{1.0, 2.5}}};
  const double r0 = 0.5;
  const auto d = annulus_defF(B0, r0);
  CHECK(d.N == least_power(r0, d.M));
  CHECK(std::pow(r0, d.N) * d.M < 0.5);
  double on_b0 = 0.0, off = 0.0, inner = 0.0;
  for (int k = 0; k < 512; ++k) {
    const double t = kTwoPi * (k + 0.5) / 512;
    const double m = std::abs(d.F(std::polar(1.0, t)));
    if (B0.contains(t))
      on_b0 = std::max(on_b0, std::abs(m - 1.0));
    else
      off = std::max(off, m);
    inner = std::max(inner, std::abs(d.F(std::polar(r0, t))));
  }
  CHECK(on_b0 < 1e-6);
  CHECK(off <= 0.5 + 1e-6);
  CHECK(inner <= 0.5 + 1e-6);
}

TEST_CASE("szego_eval_bound") {
  CHECK(szego_eval_bound(0.0) == 1.0);
  CHECK(szego_eval_bound(0.9) == doctest::Approx(2.2941573387).epsilon(1e-10));
  double prev = 0.0;
  for (double r = 0.0; r < 0.99; r += 0.05) {
    CHECK(szego_eval_bound(r) > prev);
    prev = szego_eval_bound(r);
  }
  CHECK_THROWS_AS((void)szego_eval_bound(1.0), DomainError);
}
