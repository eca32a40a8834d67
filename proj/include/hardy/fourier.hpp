#pragma once
// Sampled circles and their discrete Fourier coefficients.

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace hardy {

using cd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

bool is_power_of_two(long n) noexcept;

// Unnormalized DFTs: forward uses e^{-2 pi i jk/N}, backward e^{+2 pi i jk/N}.
// Backed by FFTW; plans are cached per length and safe to share across threads.
void fft_forward(std::span<const cd> in, std::span<cd> out);
void fft_backward(std::span<const cd> in, std::span<cd> out);

/// Equispaced samples g(radius * e^{i t_k}), t_k = 2 pi k / N.
class CircleGrid {
 public:
  CircleGrid(double radius, std::vector<cd> samples);

  template <class F>
  static CircleGrid sample(double radius, int n, F&& g_of_t) {
    std::vector<cd> s(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) s[static_cast<std::size_t>(k)] = g_of_t(angle(k, n));
    return CircleGrid(radius, std::move(s));
  }

  static double angle(int k, int n) noexcept { return kTwoPi * k / n; }

  double radius() const noexcept { return radius_; }
  int n_samples() const noexcept { return static_cast<int>(samples_.size()); }
  const std::vector<cd>& samples() const noexcept { return samples_; }
  std::vector<cd>& samples() noexcept { return samples_; }
  cd point(int k) const { return std::polar(radius_, angle(k, n_samples())); }

 private:
  double radius_;
  std::vector<cd> samples_;
};

/// Coefficients c_n for n in [-N/2, N/2 - 1] of a sampled circle.
class FourierCoeffs {
 public:
  FourierCoeffs(double radius, int n);  // all zero
  double radius() const noexcept { return radius_; }
  int size() const noexcept { return static_cast<int>(c_.size()); }
  int min_index() const noexcept { return -size() / 2; }
  int max_index() const noexcept { return size() / 2 - 1; }
  bool contains(int n) const noexcept { return n >= min_index() && n <= max_index(); }
  cd& operator[](int n) { return c_[static_cast<std::size_t>(n - min_index())]; }
  const cd& operator[](int n) const { return c_[static_cast<std::size_t>(n - min_index())]; }
  cd at_or_zero(int n) const { return contains(n) ? (*this)[n] : cd{}; }
  // Largest |n| with |c_n| > rel * max|c|; -1 when all are zero.
  int band(double rel = 1e-14) const;
  double l2_norm() const;  // Parseval: sqrt(sum |c_n|^2)

  // Storage in natural order (index n - min_index()).
  const std::vector<cd>& data() const noexcept { return c_; }

 private:
  double radius_;
  std::vector<cd> c_;
};

FourierCoeffs analyze(const CircleGrid& g);

// Throws AliasingError when n_samples < 2 * band + 2.
CircleGrid synthesize(const FourierCoeffs& c, int n_samples, double rel_tol = 1e-14);

// FFT-order helpers: slot k of an N-point transform holds mode k (k < N/2) or k - N.
inline int mode_of_slot(int k, int n) noexcept { return k < n / 2 ? k : k - n; }
inline int slot_of_mode(int m, int n) noexcept { return m >= 0 ? m : m + n; }

}  // namespace hardy
