// Scalar reference vs AVX2 variants: every dispatched kernel must agree with
// its reference on random inputs (including odd tails) to rounding level.
#include <doctest.h>

#include <random>
#include <vector>

#include "hardy/kernels.hpp"

using namespace hardy::kernels;

namespace {

std::vector<cd> random_points(std::mt19937_64& rng, std::size_t n, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<cd> v(n);
  for (auto& z : v) z = {u(rng), u(rng)};
  return v;
}

struct IsaGuard {
  Isa saved = active_isa();
  ~IsaGuard() { force_isa(saved); }
};

}  // namespace

TEST_CASE("horner matches direct power sums") {
  std::mt19937_64 rng(7);
  const auto coeffs = random_points(rng, 33, 1.0);
  const auto pts = random_points(rng, 37, 0.9);
  std::vector<cd> out(pts.size());
  horner(coeffs, pts, out);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    cd direct{};
    cd zk{1.0, 0.0};
    for (const cd& c : coeffs) {
      direct += c * zk;
      zk *= pts[j];
    }
    CHECK(std::abs(out[j] - direct) < 1e-12);
  }
}

TEST_CASE("abs_pow_sum reference values") {
  const std::vector<cd> v{{3.0, 4.0}, {0.0, 1.0}, {1.0, 0.0}};
  CHECK(scalar::abs_pow_sum(v, 2.0) == doctest::Approx(27.0));
  CHECK(scalar::abs_pow_sum(v, 4.0) == doctest::Approx(627.0));
  CHECK(scalar::abs_pow_sum(v, 3.0) == doctest::Approx(127.0));
  CHECK(is_even_integer(4.0));
  CHECK_FALSE(is_even_integer(3.0));
  CHECK_FALSE(is_even_integer(2.5));
}

TEST_CASE("beltrami_twist inverse pair") {
  std::mt19937_64 rng(11);
  const auto f = random_points(rng, 19, 2.0);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  std::vector<double> nu(f.size());
  for (auto& x : nu) x = u(rng);
  std::vector<cd> w(f.size()), back(f.size());
  beltrami_twist(f, nu, +1, w);
  beltrami_twist(w, nu, -1, back);
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double c = std::sqrt(1.0 - nu[j] * nu[j]);
    CHECK(std::abs(w[j] - (f[j] - nu[j] * std::conj(f[j])) / c) < 1e-14);
    CHECK(std::abs(back[j] - f[j]) < 1e-13);
  }
}

#if defined(HARDY_BUILD_AVX2)
TEST_CASE("scalar and AVX2 variants agree") {
  if (!avx2_available()) {
    MESSAGE("AVX2 not available; equivalence test skipped");
    return;
  }
  IsaGuard guard;
  std::mt19937_64 rng(2024);
  for (std::size_t n : {0u, 1u, 2u, 3u, 5u, 8u, 31u, 64u, 1027u}) {
    CAPTURE(n);
    const auto a = random_points(rng, n, 1.0);
    const auto b = random_points(rng, n, 1.0);
    const auto coeffs = random_points(rng, 17, 1.0);
    std::vector<double> nu(n);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (auto& x : nu) x = u(rng);

    std::vector<cd> h_s(n), h_v(n), t_s(n), t_v(n), m_s(n), m_v(n);
    scalar::horner(coeffs, a, h_s);
    avx2::horner(coeffs, a, h_v);
    scalar::beltrami_twist(a, nu, -1, t_s);
    avx2::beltrami_twist(a, nu, -1, t_v);
    scalar::cmul(a, b, m_s);
    avx2::cmul(a, b, m_v);
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(std::abs(h_s[j] - h_v[j]) <= 1e-13 * (1.0 + std::abs(h_s[j])));
      CHECK(std::abs(t_s[j] - t_v[j]) <= 1e-14 * (1.0 + std::abs(t_s[j])));
      CHECK(std::abs(m_s[j] - m_v[j]) <= 1e-15 * (1.0 + std::abs(m_s[j])));
    }
    for (double p : {2.0, 4.0, 6.0, 3.0}) {
      const double s = scalar::abs_pow_sum(a, p);
      CHECK(std::abs(avx2::abs_pow_sum(a, p) - s) <= 1e-13 * (1.0 + s));
    }
    const cd ds = scalar::dot(a, b);
    CHECK(std::abs(avx2::dot(a, b) - ds) <= 1e-13 * (1.0 + std::abs(ds)));

    // Dispatcher honours force_isa.
    force_isa(Isa::Scalar);
    std::vector<cd> d_s(n);
    horner(coeffs, a, d_s);
    force_isa(Isa::Avx2);
    std::vector<cd> d_v(n);
    horner(coeffs, a, d_v);
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(d_s[j] - d_v[j]) <= 1e-13 * (1.0 + std::abs(d_s[j])));
  }
}
#endif
