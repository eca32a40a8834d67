#include "hardy/annulus_surface.hpp"

#include <algorithm>
#include <cmath>

#include "hardy/error.hpp"

namespace hardy {

namespace {

std::vector<double> uniform_radii(double r0, int n_r) {
  std::vector<double> r(static_cast<std::size_t>(n_r));
  for (int i = 0; i < n_r; ++i) r[static_cast<std::size_t>(i)] = r0 + (1.0 - r0) * i / (n_r - 1);
  r.back() = 1.0;
  return r;
}

double frac(double x) { return x - std::floor(x); }

// sinh(a) / sinh(b) for 0 <= a <= b without overflow.
double sinh_ratio(double a, double b) {
  if (b == 0.0) return 0.0;
  if (b < 1.0) return std::sinh(a) / std::sinh(b);
  return std::exp(a - b) * (-std::expm1(-2.0 * a)) / (-std::expm1(-2.0 * b));
}

// Multipliers of mode m for the outer and inner densities at radius r.
std::pair<double, double> strip_multipliers(int m, double r, double q0) {
  const double lr = std::log(r);
  if (m == 0) return {(q0 + lr) / q0, -lr / q0};
  const double n = std::abs(m);
  return {sinh_ratio(n * (q0 + lr), n * q0), sinh_ratio(-n * lr, n * q0)};
}

void check_r0(double r0) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw DomainError("r0 must lie in (0, 1)");
}

}  // namespace

double LiftedFunction::automorphy_defect() const {
  double d = 0.0;
  const int total = static_cast<int>(values.cols());
  for (int i = 0; i < values.rows(); ++i)
    for (int j = 0; j + n_t < total; ++j)
      d = std::max(d, std::abs(std::abs(values(i, j + n_t)) - std::abs(values(i, j))));
  return d;
}

LiftedFunction lift(const AnalyticSelfMap& phi, int n_r, int n_t, int periods) {
  if (phi.source().is_disk()) throw PreconditionError("lift: symbol must live on the annulus");
  const double r0 = phi.source().inner_radius;
  LiftedFunction F{r0, uniform_radii(r0, n_r), n_t, periods, FieldMatrix(n_r, n_t * periods), {1.0, 0.0}, 0.0, {}};
  for (int i = 0; i < n_r; ++i)
    for (int j = 0; j < n_t * periods; ++j) F.values(i, j) = phi(std::polar(F.radii[static_cast<std::size_t>(i)], F.t(j)));
  F.exact = [phi](double r, double t) { return phi(std::polar(r, t)); };
  return F;
}

double index_of(const CircleGrid& log_outer, const CircleGrid& log_inner, double r0) {
  check_r0(r0);
  double mo = 0.0, mi = 0.0;
  for (const cd& v : log_outer.samples()) mo += v.real();
  for (const cd& v : log_inner.samples()) mi += v.real();
  mo /= log_outer.n_samples();
  mi /= log_inner.n_samples();
  return frac((mo - mi) / -std::log(r0));
}

double index_distance_to_zero(double index) {
  const double f = frac(index);
  return std::min(f, 1.0 - f);
}

double sarason_K(double r, double t, double r0) {
  check_r0(r0);
  if (!(r > r0 && r < 1.0)) throw DomainError("sarason_K: r must lie in (r0, 1)");
  const double q0 = -std::log(r0);
  const double x = kPi / q0 * std::log(r / std::sqrt(r0));
  return (std::cos(x) / q0) / (std::cosh(kPi * t / q0) - std::sin(x));
}

double sarason_K_rewritten(double r, double t, double r0) {
  check_r0(r0);
  if (!(r > r0 && r < 1.0)) throw DomainError("sarason_K: r must lie in (r0, 1)");
  const double q0 = -std::log(r0);
  const double x = kPi * std::log(r) / q0;
  return (1.0 / q0) * (-std::sin(x)) / (std::cosh(kPi * t / q0) - std::cos(x));
}

double sarason_K_mass(double r, double r0) {
  const double q0 = -std::log(r0);
  // K decays like e^{-pi |t| / q0}; the integrand is analytic in a strip, so
  // the trapezoid rule on a truncated line converges geometrically.
  const double T = q0 * 40.0 / kPi;
  const double h = q0 / 400.0;
  const int n = static_cast<int>(std::ceil(T / h));
  double s = sarason_K(r, 0.0, r0) + sarason_K(r0 / r, 0.0, r0);
  for (int j = 1; j <= n; ++j) {
    const double t = j * h;
    s += 2.0 * (sarason_K(r, t, r0) + sarason_K(r0 / r, t, r0));
  }
  return s * h;
}

HarmonicExtension harmonic_ext_annulus(const BoundaryDensity& mu, double r0, GridSpec grid) {
  check_r0(r0);
  const int N = mu.outer.n_samples();
  if (mu.inner.n_samples() != N) throw std::invalid_argument("harmonic_ext_annulus: densities must share n_samples");
  grid.n_theta = N;
  const auto mesh = PolarMesh::make(Domain::annulus(r0), grid);
  const double q0 = -std::log(r0);
  std::vector<cd> co(static_cast<std::size_t>(N)), ci(static_cast<std::size_t>(N));
  fft_forward(mu.outer.samples(), co);
  fft_forward(mu.inner.samples(), ci);
  FieldMatrix modes(mesh->n_r(), N);
  for (int i = 0; i < mesh->n_r(); ++i) {
    const double r = mesh->radius(i);
    for (int k = 0; k < N; ++k) {
      const auto [ao, ai] = strip_multipliers(mode_of_slot(k, N), r, q0);
      modes(i, k) = (ao * co[static_cast<std::size_t>(k)] + ai * ci[static_cast<std::size_t>(k)]) / double(N);
    }
  }
  PolarGrid U = from_modes(mesh, modes);
  U.values.row(0) = Eigen::Map<const Eigen::RowVectorXcd>(mu.inner.samples().data(), N);
  U.values.row(mesh->outer_row()) = Eigen::Map<const Eigen::RowVectorXcd>(mu.outer.samples().data(), N);
  const PolarGrid lap = laplacian(U);
  double res = 0.0;
  for (int i = 1; i < mesh->outer_row(); ++i) res = std::max(res, lap.values.row(i).cwiseAbs().maxCoeff());
  const double scale = std::max(1.0, U.max_abs());
  return {std::move(U), res / scale};
}

double harmonic_ext_point(const BoundaryDensity& mu, double r0, double r, double t) {
  check_r0(r0);
  if (!(r > r0 && r < 1.0)) throw DomainError("harmonic_ext_point: r must lie in (r0, 1)");
  const double q0 = -std::log(r0);
  // The periodized kernel has poles at distance min(-ln r, q0 + ln r) from the
  // real t axis; the trapezoid rule needs N * distance well above ln(1/eps).
  const double dist = std::min(-std::log(r), q0 + std::log(r));
  int N = mu.outer.n_samples();
  while (N * dist < 40.0 && N < (1 << 16)) N *= 2;
  auto resample = [N](const CircleGrid& g) {
    return N == g.n_samples() ? g : synthesize(analyze(g), N);
  };
  const CircleGrid mo = resample(mu.outer), mi = resample(mu.inner);
  // Translates beyond J periods contribute below e^{-2 pi^2 J / q0} relative.
  const int J = static_cast<int>(std::ceil(q0 * 32.0 / (2.0 * kPi * kPi))) + 1;
  double s = 0.0;
  for (int j = 0; j < N; ++j) {
    const double tau = t - CircleGrid::angle(j, N);
    double ko = 0.0, ki = 0.0;
    for (int l = -J; l <= J; ++l) {
      ko += sarason_K(r, tau + kTwoPi * l, r0);
      ki += sarason_K(r0 / r, tau + kTwoPi * l, r0);
    }
    s += ko * mo.samples()[static_cast<std::size_t>(j)].real() + ki * mi.samples()[static_cast<std::size_t>(j)].real();
  }
  return 0.5 * s * kTwoPi / N;
}

OuterAnnulus outer_annulus(const CircleGrid& log_outer, const CircleGrid& log_inner, double r0, int n_r, int periods) {
  check_r0(r0);
  const int N = log_outer.n_samples();
  if (log_inner.n_samples() != N) throw std::invalid_argument("outer_annulus: both lines need the same sampling");
  const double q0 = -std::log(r0);
  const auto mo = analyze(log_outer);
  const auto mi = analyze(log_inner);

  // U = a0 + b0 ln r + sum_m (P_m r^|m| + Qt_m r0^|m| r^-|m|) e^{imt}; log F = H with
  // H = a0 + b0 log z + sum_{m>0} 2 P_m z^m + 2 conj(Qt_m) (r0/z)^m (Nyquist term undoubled).
  const int half = N / 2;
  std::vector<cd> P(static_cast<std::size_t>(half + 1)), Qt(static_cast<std::size_t>(half + 1));
  for (int m = 1; m <= half; ++m) {
    const cd o = m == half ? mo[-half] : mo[m];
    const cd in = m == half ? mi[-half] : mi[m];
    const double rm = std::pow(r0, m);
    Qt[static_cast<std::size_t>(m)] = (in - o * rm) / (1.0 - rm * rm);
    P[static_cast<std::size_t>(m)] = o - Qt[static_cast<std::size_t>(m)] * rm;
  }
  const double a0 = mo[0].real();
  const double b0 = (mo[0].real() - mi[0].real()) / q0;

  auto row_modes = [=](double r) {
    std::vector<cd> h(static_cast<std::size_t>(N));
    h[0] = a0 + b0 * std::log(r);
    for (int m = 1; m <= half; ++m) {
      const double w = m == half ? 1.0 : 2.0;
      const cd pos = w * P[static_cast<std::size_t>(m)] * std::pow(r, m);
      const cd neg = w * std::conj(Qt[static_cast<std::size_t>(m)]) * std::pow(r0 / r, m);
      if (m == half) {
        h[static_cast<std::size_t>(half)] = pos + neg;
      } else {
        h[static_cast<std::size_t>(m)] = pos;
        h[static_cast<std::size_t>(N - m)] = neg;
      }
    }
    return h;
  };

  OuterAnnulus out{LiftedFunction{r0, uniform_radii(r0, n_r), N, periods, FieldMatrix(n_r, N * periods),
                                  std::polar(1.0, kTwoPi * b0), frac(b0), {}},
                   b0, 0.0, {}};
  std::vector<cd> vals(static_cast<std::size_t>(N));
  for (int i = 0; i < n_r; ++i) {
    const double r = out.F.radii[static_cast<std::size_t>(i)];
    const auto h = row_modes(r);
    fft_backward(h, vals);
    for (int p = 0; p < periods; ++p)
      for (int j = 0; j < N; ++j) {
        const double t = kTwoPi * (p * N + j) / N;
        out.F.values(i, p * N + j) = std::exp(vals[static_cast<std::size_t>(j)] + cd{0.0, b0 * t});
      }
  }
  double defect = 0.0;
  for (int j = 0; j < N; ++j) {
    defect = std::max(defect, std::abs(std::abs(out.F.values(n_r - 1, j)) - std::exp(log_outer.samples()[static_cast<std::size_t>(j)].real())));
    defect = std::max(defect, std::abs(std::abs(out.F.values(0, j)) - std::exp(log_inner.samples()[static_cast<std::size_t>(j)].real())));
  }
  out.boundary_defect = defect;

  auto eval = [=](double r, double t) {
    cd h = a0 + b0 * cd{std::log(r), t};
    const cd z = std::polar(r, t);
    cd zm = 1.0, wm = 1.0;
    const cd w = r0 / z;
    for (int m = 1; m <= half; ++m) {
      zm *= z;
      wm *= w;
      const double c = m == half ? 1.0 : 2.0;
      h += c * (P[static_cast<std::size_t>(m)] * zm + std::conj(Qt[static_cast<std::size_t>(m)]) * wm);
    }
    return std::exp(h);
  };
  out.eval = eval;
  out.F.exact = eval;
  return out;
}

OmegaMeasures omega_measures(const AnalyticSelfMap& phi, double tol, int n_samples, double richardson_tol) {
  if (phi.source().is_disk() || phi.target().is_disk())
    throw PreconditionError("omega_measures: symbol must map the annulus to the annulus");
  const double r0 = phi.source().inner_radius;
  const double rt = phi.target().inner_radius;
  const double eps[3] = {1e-2, 1e-3, 1e-4};
  // Lagrange weights at 0 for nodes eps[0..2].
  double w3[3];
  for (int a = 0; a < 3; ++a) {
    double w = 1.0;
    for (int b = 0; b < 3; ++b)
      if (b != a) w *= eps[b] / (eps[b] - eps[a]);
    w3[a] = w;
  }
  OmegaMeasures m;
  m.tol = tol;
  auto count = [&](bool outer, double& m_r0, double& m_1) {
    int hits_r0 = 0, hits_1 = 0;
    for (int k = 0; k < n_samples; ++k) {
      const double t = CircleGrid::angle(k, n_samples);
      double v[3];
      for (int a = 0; a < 3; ++a) v[a] = std::abs(phi(std::polar(outer ? 1.0 - eps[a] : r0 + eps[a], t)));
      const double star = w3[0] * v[0] + w3[1] * v[1] + w3[2] * v[2];
      const double pair = (10.0 * v[2] - v[1]) / 9.0;
      m.extrapolation_spread = std::max(m.extrapolation_spread, std::abs(star - pair));
      if (std::abs(star - rt) < tol) ++hits_r0;
      if (std::abs(star - 1.0) < tol) ++hits_1;
    }
    m_r0 = static_cast<double>(hits_r0) / n_samples;
    m_1 = static_cast<double>(hits_1) / n_samples;
  };
  count(true, m.m_r0_on_outer, m.m_1_on_outer);
  count(false, m.m_r0_on_inner, m.m_1_on_inner);
  m.reliable = m.extrapolation_spread <= richardson_tol;
  return m;
}

std::string case_name(IsometryCase c) {
  switch (c) {
    case IsometryCase::Case1: return "Case1";
    case IsometryCase::Case2: return "Case2";
    case IsometryCase::Case3: return "Case3";
    case IsometryCase::NotIsometryCandidate: return "NotIsometryCandidate";
  }
  return "?";
}

IsometryCase classify_case(const OmegaMeasures& m, double tol, double case3_tol) {
  auto near = [](double a, double b, double t) { return std::abs(a - b) <= t; };
  if (near(m.m_r0_on_inner, 1.0, tol) && near(m.m_1_on_outer, 1.0, tol)) return IsometryCase::Case1;
  if (near(m.m_r0_on_outer, 1.0, tol) && near(m.m_1_on_inner, 1.0, tol)) return IsometryCase::Case2;
  if (near(m.m_r0_on_inner, 0.5, case3_tol) && near(m.m_r0_on_outer, 0.5, case3_tol)) return IsometryCase::Case3;
  return IsometryCase::NotIsometryCandidate;
}

}  // namespace hardy
