#pragma once
// Data-parallel inner loops shared by every module.
//
// Each kernel has a scalar reference implementation and, on x86-64 builds,
// an AVX2/FMA variant. The public entry points dispatch at runtime on the
// detected CPU features; force_isa() pins a variant (used by the
// equivalence tests and by `hardylab selftest --scalar`).

#include <complex>
#include <span>
#include <string_view>

namespace hardy::kernels {

using cd = std::complex<double>;

enum class Isa { Scalar, Avx2 };

bool avx2_available() noexcept;
Isa active_isa() noexcept;
// Throws std::invalid_argument if the requested variant is not compiled in or
// not supported by the CPU.
void force_isa(Isa isa);
std::string_view isa_name(Isa isa) noexcept;

// out[j] = sum_k coeffs[k] * points[j]^k  (coeffs in ascending order).
void horner(std::span<const cd> coeffs, std::span<const cd> points, std::span<cd> out);

// sum_j |v[j]|^p. Even integer p takes the multiply-only path.
double abs_pow_sum(std::span<const cd> v, double p);

// Pointwise J map (sign = +1): (f - nu conj f) / sqrt(1 - nu^2)
// and its inverse (sign = -1): (f + nu conj f) / sqrt(1 - nu^2).
void beltrami_twist(std::span<const cd> f, std::span<const double> nu, int sign,
                    std::span<cd> out);

// out[j] = a[j] * b[j]
void cmul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out);

// sum_j a[j] * b[j]
cd dot(std::span<const cd> a, std::span<const cd> b);

namespace scalar {
void horner(std::span<const cd> coeffs, std::span<const cd> points, std::span<cd> out);
double abs_pow_sum(std::span<const cd> v, double p);
void beltrami_twist(std::span<const cd> f, std::span<const double> nu, int sign,
                    std::span<cd> out);
void cmul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out);
cd dot(std::span<const cd> a, std::span<const cd> b);
}  // namespace scalar

#if defined(HARDY_BUILD_AVX2)
namespace avx2 {
void horner(std::span<const cd> coeffs, std::span<const cd> points, std::span<cd> out);
double abs_pow_sum(std::span<const cd> v, double p);
void beltrami_twist(std::span<const cd> f, std::span<const double> nu, int sign,
                    std::span<cd> out);
void cmul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out);
cd dot(std::span<const cd> a, std::span<const cd> b);
}  // namespace avx2
#endif

bool is_even_integer(double p) noexcept;

}  // namespace hardy::kernels
