// AVX2/FMA variants. Complex values stay interleaved (re, im), two per
// 256-bit register; tails fall through to the scalar code.
#include <immintrin.h>

#include <cmath>

#include "hardy/kernels.hpp"

namespace hardy::kernels::avx2 {

namespace {

inline const double* raw(std::span<const cd> s) { return reinterpret_cast<const double*>(s.data()); }
inline double* raw(std::span<cd> s) { return reinterpret_cast<double*>(s.data()); }

// (a * b) for two interleaved complex pairs, b pre-split into dup'ed real/imag parts.
inline __m256d cmul_split(__m256d a, __m256d b_re, __m256d b_im) {
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline __m256d cmul_pair(__m256d a, __m256d b) {
  return cmul_split(a, _mm256_movedup_pd(b), _mm256_permute_pd(b, 0xF));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void horner(std::span<const cd> coeffs, std::span<const cd> points, std::span<cd> out) {
  const std::size_t n = coeffs.size();
  const std::size_t m = points.size();
  const double* c = raw(coeffs);
  const double* z = raw(points);
  double* o = raw(out);
  std::size_t j = 0;
  // Four points per iteration (two registers) to hide the FMA latency chain.
  for (; j + 4 <= m; j += 4) {
    const __m256d z0 = _mm256_loadu_pd(z + 2 * j);
    const __m256d z1 = _mm256_loadu_pd(z + 2 * j + 4);
    const __m256d z0r = _mm256_movedup_pd(z0), z0i = _mm256_permute_pd(z0, 0xF);
    const __m256d z1r = _mm256_movedup_pd(z1), z1i = _mm256_permute_pd(z1, 0xF);
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    for (std::size_t k = n; k-- > 0;) {
      const __m256d ck = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(c + 2 * k));
      a0 = _mm256_add_pd(cmul_split(a0, z0r, z0i), ck);
      a1 = _mm256_add_pd(cmul_split(a1, z1r, z1i), ck);
    }
    _mm256_storeu_pd(o + 2 * j, a0);
    _mm256_storeu_pd(o + 2 * j + 4, a1);
  }
  if (j < m) scalar::horner(coeffs, points.subspan(j), out.subspan(j));
}

double abs_pow_sum(std::span<const cd> v, double p) {
  if (!is_even_integer(p)) return scalar::abs_pow_sum(v, p);
  const int half = static_cast<int>(p) / 2;
  const double* x = raw(v);
  const std::size_t m = v.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    // Squares of (re, im) for four points, then pairwise add to get |v|^2.
    const __m256d a = _mm256_loadu_pd(x + 2 * j);
    const __m256d b = _mm256_loadu_pd(x + 2 * j + 4);
    const __m256d hs = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    __m256d t = hs;
    for (int k = 1; k < half; ++k) t = _mm256_mul_pd(t, hs);
    acc = _mm256_add_pd(acc, t);
  }
  double sum = hsum(acc);
  if (j < m) sum += scalar::abs_pow_sum(v.subspan(j), p);
  return sum;
}

void beltrami_twist(std::span<const cd> f, std::span<const double> nu, int sign,
                    std::span<cd> out) {
  const double s = sign >= 0 ? 1.0 : -1.0;
  const std::size_t m = f.size();
  const double* x = raw(f);
  double* o = raw(out);
  const __m256d one = _mm256_set1_pd(1.0);
  // Lane pattern (re, im, re, im): real parts scale by (1 - s nu), imaginary by (1 + s nu).
  const __m256d pattern = _mm256_set_pd(s, -s, s, -s);
  std::size_t j = 0;
  for (; j + 2 <= m; j += 2) {
    const __m256d nv = _mm256_set_pd(nu[j + 1], nu[j + 1], nu[j], nu[j]);
    const __m256d c = _mm256_sqrt_pd(_mm256_fnmadd_pd(nv, nv, one));
    const __m256d scale = _mm256_div_pd(_mm256_fmadd_pd(pattern, nv, one), c);
    _mm256_storeu_pd(o + 2 * j, _mm256_mul_pd(_mm256_loadu_pd(x + 2 * j), scale));
  }
  if (j < m) scalar::beltrami_twist(f.subspan(j), nu.subspan(j), sign, out.subspan(j));
}

void cmul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out) {
  const std::size_t m = a.size();
  const double* x = raw(a);
  const double* y = raw(b);
  double* o = raw(out);
  std::size_t j = 0;
  for (; j + 2 <= m; j += 2)
    _mm256_storeu_pd(o + 2 * j, cmul_pair(_mm256_loadu_pd(x + 2 * j), _mm256_loadu_pd(y + 2 * j)));
  if (j < m) scalar::cmul(a.subspan(j), b.subspan(j), out.subspan(j));
}

cd dot(std::span<const cd> a, std::span<const cd> b) {
  const std::size_t m = a.size();
  const double* x = raw(a);
  const double* y = raw(b);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    acc0 = _mm256_add_pd(acc0, cmul_pair(_mm256_loadu_pd(x + 2 * j), _mm256_loadu_pd(y + 2 * j)));
    acc1 = _mm256_add_pd(acc1, cmul_pair(_mm256_loadu_pd(x + 2 * j + 4), _mm256_loadu_pd(y + 2 * j + 4)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  cd sum{lanes[0] + lanes[2], lanes[1] + lanes[3]};
  if (j < m) sum += scalar::dot(a.subspan(j), b.subspan(j));
  return sum;
}

}  // namespace hardy::kernels::avx2
