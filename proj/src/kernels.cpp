#include "hardy/kernels.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace hardy::kernels {

bool is_even_integer(double p) noexcept {
  return p >= 2.0 && p <= 64.0 && std::floor(p) == p && static_cast<long>(p) % 2 == 0;
}

namespace scalar {

void horner(std::span<const cd> coeffs, std::span<const cd> points, std::span<cd> out) {
  const std::size_t n = coeffs.size();
  for (std::size_t j = 0; j < points.size(); ++j) {
    cd acc{0.0, 0.0};
    const cd z = points[j];
    for (std::size_t k = n; k-- > 0;) acc = acc * z + coeffs[k];
    out[j] = acc;
  }
}

double abs_pow_sum(std::span<const cd> v, double p) {
  double sum = 0.0;
  if (is_even_integer(p)) {
    const int half = static_cast<int>(p) / 2;
    for (const cd& x : v) {
      const double a2 = x.real() * x.real() + x.imag() * x.imag();
      double t = a2;
      for (int k = 1; k < half; ++k) t *= a2;
      sum += t;
    }
    return sum;
  }
  for (const cd& x : v) sum += std::pow(std::abs(x), p);
  return sum;
}

void beltrami_twist(std::span<const cd> f, std::span<const double> nu, int sign,
                    std::span<cd> out) {
  // (f - s nu conj f)/c has real part Re f (1 - s nu)/c and imaginary part Im f (1 + s nu)/c.
  const double s = sign >= 0 ? 1.0 : -1.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double c = std::sqrt(1.0 - nu[j] * nu[j]);
    const double a = (1.0 - s * nu[j]) / c;
    const double b = (1.0 + s * nu[j]) / c;
    out[j] = cd{f[j].real() * a, f[j].imag() * b};
  }
}

void cmul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out) {
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
}

cd dot(std::span<const cd> a, std::span<const cd> b) {
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    re += a[j].real() * b[j].real() - a[j].imag() * b[j].imag();
    im += a[j].real() * b[j].imag() + a[j].imag() * b[j].real();
  }
  return {re, im};
}

}  // namespace scalar

namespace {

Isa detect() noexcept {
#if defined(HARDY_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool avx2_available() noexcept { return detect() == Isa::Avx2; }

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available())
    throw std::invalid_argument("AVX2 kernels are not available on this build/CPU");
  current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

#if defined(HARDY_BUILD_AVX2)
#define HARDY_DISPATCH(fn, ...)                                   \
  do {                                                            \
    if (active_isa() == Isa::Avx2) return avx2::fn(__VA_ARGS__);  \
    return scalar::fn(__VA_ARGS__);                               \
  } while (0)
#else
#define HARDY_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void horner(std::span<const cd> coeffs, std::span<const cd> points, std::span<cd> out) {
  HARDY_DISPATCH(horner, coeffs, points, out);
}

double abs_pow_sum(std::span<const cd> v, double p) { HARDY_DISPATCH(abs_pow_sum, v, p); }

void beltrami_twist(std::span<const cd> f, std::span<const double> nu, int sign,
                    std::span<cd> out) {
  HARDY_DISPATCH(beltrami_twist, f, nu, sign, out);
}

void cmul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out) {
  HARDY_DISPATCH(cmul, a, b, out);
}

cd dot(std::span<const cd> a, std::span<const cd> b) { HARDY_DISPATCH(dot, a, b); }

#undef HARDY_DISPATCH

}  // namespace hardy::kernels
