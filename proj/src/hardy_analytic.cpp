#include "hardy/hardy_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hardy/error.hpp"
#include "hardy/kernels.hpp"

namespace hardy {

LaurentSeries::LaurentSeries(double inner_radius, int lo, std::vector<cd> coeffs)
    : rho_(inner_radius), lo_(lo), c_(std::move(coeffs)) {
  if (!(rho_ >= 0.0 && rho_ < 1.0)) throw std::invalid_argument("LaurentSeries: inner radius must lie in [0, 1)");
  if (rho_ == 0.0 && lo_ < 0) {
    for (int n = lo_; n < 0 && n <= hi(); ++n)
      if ((*this)[n] != cd{}) throw std::invalid_argument("LaurentSeries: disk series with negative powers");
    const int drop = std::min(-lo_, static_cast<int>(c_.size()));
    c_.erase(c_.begin(), c_.begin() + drop);
    lo_ = 0;
  }
}

LaurentSeries LaurentSeries::monomial(double inner_radius, int k, cd c) {
  return LaurentSeries(inner_radius, k, {c});
}

cd LaurentSeries::operator[](int n) const noexcept {
  if (n < lo_ || n > hi()) return {};
  return c_[static_cast<std::size_t>(n - lo_)];
}

void LaurentSeries::evaluate(std::span<const cd> z, std::span<cd> out) const {
  std::fill(out.begin(), out.end(), cd{});
  if (c_.empty()) return;
  if (hi() >= 0) {
    std::vector<cd> pos(static_cast<std::size_t>(hi() + 1));
    for (int n = std::max(lo_, 0); n <= hi(); ++n) pos[static_cast<std::size_t>(n)] = (*this)[n];
    kernels::horner(pos, z, out);
  }
  if (lo_ < 0) {
    // sum_{m>=1} a_{-m} w^m with w = 1/z
    std::vector<cd> neg(static_cast<std::size_t>(-lo_ + 1));
    for (int m = 1; m <= -lo_; ++m) neg[static_cast<std::size_t>(m)] = (*this)[-m];
    std::vector<cd> w(z.size()), part(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) w[j] = 1.0 / z[j];
    kernels::horner(neg, w, part);
    for (std::size_t j = 0; j < z.size(); ++j) out[j] += part[j];
  }
}

cd LaurentSeries::operator()(cd z) const {
  cd v;
  evaluate(std::span<const cd>(&z, 1), std::span<cd>(&v, 1));
  return v;
}

bool LaurentSeries::tail_ok(double tol) const {
  if (c_.empty()) return true;
  auto weighted = [&](int n) { return std::abs((*this)[n]) * (n < 0 ? std::pow(rho_, n) : 1.0); };
  double peak = 0.0;
  for (int n = lo_; n <= hi(); ++n) peak = std::max(peak, weighted(n));
  if (peak == 0.0) return true;
  // Only a long series has a tail to judge.
  if (c_.size() < 8) return true;
  return std::max({weighted(hi()), weighted(hi() - 1)}) <= tol * peak &&
         (lo_ >= 0 || std::max(weighted(lo_), weighted(lo_ + 1)) <= tol * peak);
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
  if (empty()) return o;
  if (o.empty()) return *this;
  const int lo = std::min(lo_, o.lo_), hi = std::max(this->hi(), o.hi());
  std::vector<cd> c(static_cast<std::size_t>(hi - lo + 1));
  for (int n = lo; n <= hi; ++n) c[static_cast<std::size_t>(n - lo)] = (*this)[n] + o[n];
  return LaurentSeries(std::max(rho_, o.rho_), lo, std::move(c));
}

AnnulusTrace::AnnulusTrace(CircleGrid outer_, CircleGrid inner_)
    : outer(std::move(outer_)), inner(std::move(inner_)), r0(inner.radius()) {
  if (outer.n_samples() != inner.n_samples())
    throw std::invalid_argument("AnnulusTrace: circles must share n_samples");
  if (!(r0 > 0.0 && r0 < 1.0) || outer.radius() != 1.0)
    throw std::invalid_argument("AnnulusTrace: expects radii 1 and r0 in (0, 1)");
}

CircleGrid HardyFunction::trace(int n_samples) const {
  return CircleGrid::sample(1.0, n_samples, [&](double t) { return (*this)(std::polar(1.0, t)); });
}

AnnulusTrace HardyFunction::annulus_trace(int n_samples) const {
  if (inner_radius() <= 0.0) throw DomainError("annulus_trace: function lives on the disk");
  return AnnulusTrace::sample(inner_radius(), n_samples, [&](cd z) { return (*this)(z); });
}

FourierCoeffs hardy_project_disk(const FourierCoeffs& c) {
  FourierCoeffs out = c;
  for (int n = c.min_index(); n < 0; ++n) out[n] = 0.0;
  return out;
}

AnnulusSplit annulus_split(const LaurentSeries& f) {
  if (f.inner_radius() <= 0.0) throw std::invalid_argument("annulus_split: needs an annulus series");
  std::vector<cd> pos, neg;
  for (int n = std::max(f.lo(), 0); n <= f.hi(); ++n) pos.push_back(f[n]);
  for (int n = f.lo(); n < 0 && n <= f.hi(); ++n) neg.push_back(f[n]);
  LaurentSeries g(f.inner_radius(), std::max(f.lo(), 0), std::move(pos));
  LaurentSeries h(f.inner_radius(), f.lo(), std::move(neg));
  return {std::move(g), std::move(h)};
}

Membership annulus_membership(const AnnulusTrace& t, double tol) {
  const auto co = analyze(t.outer);
  const auto ci = analyze(t.inner);
  double scale = 1.0;
  for (const auto* g : {&t.outer, &t.inner})
    for (const cd& v : g->samples()) scale = std::max(scale, std::abs(v));
  double defect = 0.0;
  for (int n = co.min_index(); n <= co.max_index(); ++n) {
    const double rn = std::pow(t.r0, n);
    defect = std::max(defect, std::abs(ci[n] - rn * co[n]) / std::max(1.0, rn));
  }
  defect /= scale;
  return {defect <= tol, defect};
}

double boundary_norm(const CircleGrid& t, double p) {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("boundary_norm: p must lie in (1, inf)");
  return std::pow(kernels::abs_pow_sum(t.samples(), p) / t.n_samples(), 1.0 / p);
}

double boundary_norm(const AnnulusTrace& t, double p) {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("boundary_norm: p must lie in (1, inf)");
  const double s = kernels::abs_pow_sum(t.outer.samples(), p) / t.outer.n_samples() +
                   kernels::abs_pow_sum(t.inner.samples(), p) / t.inner.n_samples();
  return std::pow(s, 1.0 / p);
}

InteriorValue eval_interior(const LaurentSeries& f, cd z) {
  const double r = std::abs(z);
  if (!(r < 1.0 && r > f.inner_radius()))
    throw DomainError("eval_interior: point outside the open domain");
  double tail = 0.0;
  if (!f.empty()) {
    tail += std::abs(f[f.hi()]) * std::pow(r, f.hi());
    if (f.lo() < 0) tail += std::abs(f[f.lo()]) * std::pow(r, f.lo());
  }
  return {f(z), tail};
}

double ArcSet::measure() const {
  double m = 0.0;
  for (const Arc& a : arcs) m += a.b - a.a;
  return m / kTwoPi;
}

bool ArcSet::contains(double t) const {
  for (const Arc& a : arcs) {
    const double u = a.a + std::fmod(std::fmod(t - a.a, kTwoPi) + kTwoPi, kTwoPi);
    if (u <= a.b) return true;
  }
  return false;
}

HardyFunction outer_disk(const CircleGrid& log_modulus, int n_coeffs) {
  const int n = log_modulus.n_samples();
  if (n_coeffs <= 0) n_coeffs = n;
  const auto c = analyze(log_modulus);
  // Analytic completion of the Poisson extension: H = c_0 + 2 sum_{n>0} c_n z^n.
  // The Nyquist coefficient is shared by +-N/2 and contributes half to each side.
  std::vector<cd> h(static_cast<std::size_t>(n / 2 + 1));
  h[0] = c[0].real();
  for (int m = 1; m < n / 2; ++m) h[static_cast<std::size_t>(m)] = 2.0 * c[m];
  h[static_cast<std::size_t>(n / 2)] = c[-n / 2];

  // Taylor coefficients of e^H from an oversampled circle.
  const int big = 4 * std::max(n, n_coeffs);
  std::vector<cd> pts(static_cast<std::size_t>(big)), vals(static_cast<std::size_t>(big));
  for (int k = 0; k < big; ++k) pts[static_cast<std::size_t>(k)] = std::polar(1.0, CircleGrid::angle(k, big));
  kernels::horner(h, pts, vals);
  for (cd& v : vals) v = std::exp(v);
  const auto fc = analyze(CircleGrid(1.0, std::move(vals)));
  std::vector<cd> taylor(static_cast<std::size_t>(n_coeffs));
  for (int m = 0; m < n_coeffs; ++m) taylor[static_cast<std::size_t>(m)] = fc[m];

  auto exact = [h = std::move(h)](cd z) {
    cd v;
    kernels::horner(h, std::span<const cd>(&z, 1), std::span<cd>(&v, 1));
    return std::exp(v);
  };
  return HardyFunction(LaurentSeries::disk(std::move(taylor)), std::move(exact));
}

namespace {

// (1/2pi) int_a^b (e^{it} + z)/(e^{it} - z) dt for |z| <= 1, z off the endpoints.
cd herglotz_arc(const Arc& arc, cd z) {
  const cd ea = std::polar(1.0, arc.a), eb = std::polar(1.0, arc.b);
  const cd ratio = (eb - z) / (ea - z);
  // arg(e^{it} - z) increases monotonically along the arc for z in the closed disk.
  double darg = std::arg(ratio);
  if (darg <= 0.0) darg += kTwoPi;
  const double len = arc.b - arc.a;
  return cd{-len + 2.0 * darg, -2.0 * std::log(std::abs(ratio))} / kTwoPi;
}

}  // namespace

HardyFunction outer_disk(double base, const std::vector<std::pair<Arc, double>>& jumps) {
  for (const auto& [arc, v] : jumps)
    if (!(arc.b > arc.a && arc.b - arc.a < kTwoPi)) throw std::invalid_argument("outer_disk: bad arc");
  auto exact = [base, jumps](cd z) {
    if (std::abs(z) > 1.0 + 1e-12) throw DomainError("outer_disk: point outside the closed disk");
    cd h = base;
    for (const auto& [arc, v] : jumps) h += v * herglotz_arc(arc, z);
    return std::exp(h);
  };
  // Taylor series read off a slightly smaller circle (the boundary data jumps).
  const int n = 1024, keep = 256;
  const double rho = 0.95;
  const auto g = CircleGrid::sample(rho, n, [&](double t) { return exact(std::polar(rho, t)); });
  const auto fc = analyze(g);
  std::vector<cd> taylor(static_cast<std::size_t>(keep));
  for (int m = 0; m < keep; ++m) taylor[static_cast<std::size_t>(m)] = fc[m] / std::pow(rho, m);
  return HardyFunction(LaurentSeries::disk(std::move(taylor)), std::move(exact));
}

int least_power(double r0, double M) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw std::invalid_argument("least_power: r0 must lie in (0, 1)");
  int N = 0;
  while (std::pow(r0, N) * M >= 0.5) ++N;
  return N;
}

DefF annulus_defF(const ArcSet& B0, double r0, int n_samples) {
  if (B0.arcs.empty() || !(B0.measure() > 0.0)) throw std::invalid_argument("annulus_defF: B0 must have positive measure");
  if (!(r0 > 0.0 && r0 < 1.0)) throw std::invalid_argument("annulus_defF: r0 must lie in (0, 1)");
  const double lo = std::log(0.5);
  std::vector<std::pair<Arc, double>> jumps;
  for (const Arc& a : B0.arcs) jumps.emplace_back(a, -lo);
  HardyFunction g = outer_disk(lo, jumps);
  double M = 0.0;
  for (int k = 0; k < n_samples; ++k) M = std::max(M, std::abs(g(std::polar(r0, CircleGrid::angle(k, n_samples)))));
  const int N = least_power(r0, M);

  const auto& gs = g.series().coeffs();
  LaurentSeries shifted(r0, N, gs);
  auto exact = [g, N](cd z) { return std::pow(z, N) * g(z); };
  return {HardyFunction(std::move(shifted), std::move(exact)), N, M};
}

double szego_eval_bound(cd z) {
  const double r2 = std::norm(z);
  if (!(r2 < 1.0)) throw DomainError("szego_eval_bound: |z| must be < 1");
  return 1.0 / std::sqrt(1.0 - r2);
}

}  // namespace hardy
