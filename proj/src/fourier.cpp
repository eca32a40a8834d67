#include "hardy/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "hardy/error.hpp"

namespace hardy {

bool is_power_of_two(long n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

namespace {

// FFTW planning is not thread-safe; execution with new-array execute is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mu_);
    const auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_complex* in = fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

void run(std::span<const cd> in, std::span<cd> out, int sign) {
  const int n = static_cast<int>(in.size());
  if (n == 0) return;
  fftw_plan plan = plans().get(n, sign);
  // FFTW never writes to the input of an out-of-place complex DFT.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<cd*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  if (in.data() == out.data()) {
    std::vector<cd> tmp(in.begin(), in.end());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()), dst);
    return;
  }
  fftw_execute_dft(plan, src, dst);
}

}  // namespace

void fft_forward(std::span<const cd> in, std::span<cd> out) { run(in, out, FFTW_FORWARD); }
void fft_backward(std::span<const cd> in, std::span<cd> out) { run(in, out, FFTW_BACKWARD); }

CircleGrid::CircleGrid(double radius, std::vector<cd> samples)
    : radius_(radius), samples_(std::move(samples)) {
  if (!(radius_ > 0.0)) throw std::invalid_argument("CircleGrid: radius must be positive");
  const auto n = static_cast<long>(samples_.size());
  if (n < 8 || !is_power_of_two(n))
    throw std::invalid_argument("CircleGrid: n_samples must be a power of two >= 8");
}

FourierCoeffs::FourierCoeffs(double radius, int n) : radius_(radius), c_(static_cast<std::size_t>(n)) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("FourierCoeffs: size must be even");
}

int FourierCoeffs::band(double rel) const {
  double cmax = 0.0;
  for (const cd& v : c_) cmax = std::max(cmax, std::abs(v));
  if (cmax == 0.0) return -1;
  int b = 0;
  for (int n = min_index(); n <= max_index(); ++n)
    if (std::abs((*this)[n]) > rel * cmax) b = std::max(b, std::abs(n));
  return b;
}

double FourierCoeffs::l2_norm() const {
  double s = 0.0;
  for (const cd& v : c_) s += std::norm(v);
  return std::sqrt(s);
}

FourierCoeffs analyze(const CircleGrid& g) {
  const int n = g.n_samples();
  std::vector<cd> spec(static_cast<std::size_t>(n));
  fft_forward(g.samples(), spec);
  FourierCoeffs c(g.radius(), n);
  const double inv = 1.0 / n;
  for (int k = 0; k < n; ++k) c[mode_of_slot(k, n)] = spec[static_cast<std::size_t>(k)] * inv;
  return c;
}

CircleGrid synthesize(const FourierCoeffs& c, int n_samples, double rel_tol) {
  // Same length as the coefficient set is an exact inverse; anything else must
  // hold the whole nonzero band.
  const int band = n_samples == c.size() ? c.size() / 2 : c.band(rel_tol);
  if (n_samples != c.size() && n_samples < 2 * band + 2) {
    std::ostringstream msg;
    msg << "synthesize: " << n_samples << " samples cannot resolve band " << band
        << " (need at least " << 2 * band + 2 << ")";
    throw AliasingError(msg.str());
  }
  std::vector<cd> spec(static_cast<std::size_t>(n_samples));
  for (int m = -band; m <= band; ++m) {
    if (!c.contains(m)) continue;
    spec[static_cast<std::size_t>(slot_of_mode(m, n_samples))] = c[m];
  }
  std::vector<cd> out(static_cast<std::size_t>(n_samples));
  fft_backward(spec, out);
  return CircleGrid(c.radius(), std::move(out));
}

}  // namespace hardy
