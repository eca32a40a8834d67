#include "hardy/compop.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hardy/annulus_surface.hpp"
#include "hardy/error.hpp"
#include "hardy/polar.hpp"

namespace hardy {

namespace {

cd uniform_in_disk(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = std::sqrt(u(rng));
  return std::polar(r, kTwoPi * u(rng));
}

// Each (seed, index) pair gets its own stream so trials do not depend on order.
std::mt19937_64 stream(std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

void require_target(const Domain& d, cd w, const char* who) {
  if (!d.contains_closed(w, 1e-12)) {
    std::ostringstream msg;
    msg << who << ": phi takes the value " << w << " outside its codomain";
    throw PreconditionError(msg.str());
  }
}

template <class Eval>
BoundaryTrace compose_with(const AnalyticSelfMap& phi, int n, Eval&& f) {
  const Domain& src = phi.source();
  auto one = [&](double r) {
    return CircleGrid::sample(r, n, [&](double t) {
      const cd w = phi(std::polar(r, t));
      require_target(phi.target(), w, "compose_trace");
      return f(w);
    });
  };
  BoundaryTrace out{one(1.0), std::nullopt};
  if (!src.is_disk()) out.inner = one(src.inner_radius);
  return out;
}

double rel_dev(double a, double b) { return std::abs(a - b) / b; }

// Coefficients of g(e^{it}) samples in FFT order, divided by N.
std::vector<cd> fft_coeffs(std::vector<cd> s) {
  std::vector<cd> c(s.size());
  fft_forward(s, c);
  for (cd& v : c) v /= double(s.size());
  return c;
}

}  // namespace

double DiagnosticsReport::get(const std::string& key) const {
  for (const auto& [k, v] : certificates)
    if (k == key) return v;
  throw std::out_of_range("no certificate '" + key + "' in " + name);
}

double BoundaryTrace::norm(double p) const {
  if (!inner) return boundary_norm(outer, p);
  return boundary_norm(AnnulusTrace(outer, *inner), p);
}

BoundaryTrace compose_trace(const HardyFunction& f, const AnalyticSelfMap& phi, int n_samples) {
  return compose_with(phi, n_samples, [&](cd w) { return f(w); });
}

BoundaryTrace compose_trace(const GenHardyFunction& f, const AnalyticSelfMap& phi, int n_samples) {
  if (f.values.domain() != phi.target()) throw PreconditionError("compose_trace: f does not live on phi's codomain");
  return compose_with(phi, n_samples, [&](cd w) { return f.values.evaluate(w); });
}

double norm_bound_disk(const AnalyticSelfMap& phi, double p) {
  if (!phi.source().is_disk() || !phi.target().is_disk()) throw PreconditionError("norm_bound_disk: disk symbols only");
  if (!(p > 1.0)) throw std::invalid_argument("norm_bound_disk: p must exceed 1");
  const double a = std::abs(phi(0.0));
  if (!(a < 1.0)) throw PreconditionError("norm_bound_disk: |phi(0)| = 1, degenerate symbol");
  return std::pow((1.0 + a) / (1.0 - a), 1.0 / p);
}

OperatorMatrix matrix_truncate(const AnalyticSelfMap& phi, int M) {
  if (M < 1) throw std::invalid_argument("matrix_truncate: M must be positive");
  const bool ann = !phi.source().is_disk();
  if (ann != !phi.target().is_disk() || (ann && phi.source().inner_radius != phi.target().inner_radius))
    throw PreconditionError("matrix_truncate: source and target must be the same domain");
  int N = 4096;
  while (N < 8 * M) N *= 2;
  OperatorMatrix out;
  if (ann) M = 2 * (M / 2) + 1;
  out.size = M;
  out.annulus = ann;
  out.r0 = ann ? phi.source().inner_radius : 0.0;
  out.lo = ann ? -(M / 2) : 0;
  out.entries = Eigen::MatrixXcd::Zero(M, M);
  std::vector<cd> vals(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) vals[static_cast<std::size_t>(k)] = phi(std::polar(1.0, CircleGrid::angle(k, N)));
  const double r0 = out.r0;
  auto weight = [&](int n) { return ann ? std::sqrt(1.0 + std::pow(r0, 2.0 * n)) : 1.0; };
  std::vector<cd> pw(static_cast<std::size_t>(N));
  for (int j = 0; j < M; ++j) {
    const int n = out.lo + j;
    for (int k = 0; k < N; ++k) pw[static_cast<std::size_t>(k)] = std::pow(vals[static_cast<std::size_t>(k)], n);
    const auto c = fft_coeffs(pw);
    double tail = 0.0;
    for (int s = 0; s < N; ++s) {
      const int m = mode_of_slot(s, N);
      const cd v = c[static_cast<std::size_t>(s)] * weight(m) / weight(n);
      if (m >= out.lo && m < out.lo + M)
        out.entries(m - out.lo, j) = v;
      else
        tail += std::norm(v);
    }
    out.tail = std::max(out.tail, std::sqrt(tail));
  }
  return out;
}

LaurentSeries random_polynomial(std::uint64_t seed, int index, int max_degree) {
  auto rng = stream(seed, index);
  const int deg = std::uniform_int_distribution<int>(1, max_degree)(rng);
  std::vector<cd> c(static_cast<std::size_t>(deg + 1));
  for (cd& v : c) v = uniform_in_disk(rng);
  return LaurentSeries::disk(std::move(c));
}

LaurentSeries random_laurent(std::uint64_t seed, int index, double r0, int max_degree) {
  auto rng = stream(seed, index);
  const int deg = std::uniform_int_distribution<int>(1, max_degree)(rng);
  std::vector<cd> c(static_cast<std::size_t>(2 * deg + 1));
  for (int n = -deg; n <= deg; ++n)
    c[static_cast<std::size_t>(n + deg)] = uniform_in_disk(rng) / std::sqrt(1.0 + std::pow(r0, 2.0 * n));
  return LaurentSeries(r0, -deg, std::move(c));
}

NormEstimate norm_estimate(const AnalyticSelfMap& phi, double p, int trials, std::uint64_t seed, int M,
                           int n_samples) {
  const Domain& src = phi.source();
  const double r0 = src.is_disk() ? 0.0 : src.inner_radius;
  NormEstimate out{0.0, 0.0, 0.0, trials};
  for (int i = 0; i < trials; ++i) {
    HardyFunction f(LaurentSeries::disk({1.0}));
    if (src.is_disk() && i % 2 == 1) {
      // Normalized kernel-type outer functions, which concentrate near T.
      auto rng = stream(seed, 100000 + i);
      const cd b = 0.9 * uniform_in_disk(rng);
      const double e = 2.0 / p, scale = std::pow(1.0 - std::norm(b), 1.0 / p);
      f = HardyFunction(LaurentSeries::disk({1.0}), [=](cd z) { return scale * std::pow(1.0 - std::conj(b) * z, -e); });
    } else {
      f = HardyFunction(src.is_disk() ? random_polynomial(seed, i) : random_laurent(seed, i, r0));
    }
    const double nf = compose_trace(f, AnalyticSelfMap::rotation(src, 1.0), n_samples).norm(p);
    const double nc = compose_trace(f, phi, n_samples).norm(p);
    out.sampled = std::max(out.sampled, nc / nf);
  }
  if (p == 2.0 && src.is_disk()) {
    const auto A = matrix_truncate(phi, M).entries;
    const Eigen::MatrixXcd G = A.adjoint() * A;
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(M) / std::sqrt(double(M));
    double lam = 0.0;
    for (int it = 0; it < 2000; ++it) {
      Eigen::VectorXcd u = G * v;
      const double nl = u.norm();
      if (nl == 0.0) break;
      v = u / nl;
      if (std::abs(nl - lam) <= 1e-15 * nl) {
        lam = nl;
        break;
      }
      lam = nl;
    }
    out.power_iteration = std::sqrt(lam);
  }
  out.estimate = std::max(out.sampled, out.power_iteration);
  return out;
}

DiagnosticsReport isometry_check_disk(const AnalyticSelfMap& phi, double p, int trials, std::uint64_t seed,
                                      int n_samples, bool nu_context, const Tolerances& tol) {
  if (!phi.source().is_disk() || !phi.target().is_disk()) throw PreconditionError("isometry_check_disk: disk symbols only");
  DiagnosticsReport r;
  r.name = "isometry_disk";
  const double a = std::abs(phi(0.0));
  double min_mod = 1.0;
  for (int k = 0; k < 4096; ++k) min_mod = std::min(min_mod, std::abs(phi(std::polar(1.0, CircleGrid::angle(k, 4096)))));
  double dev = 0.0, mean_dev = 0.0;
  int witness = -1;
  const auto id = AnalyticSelfMap::rotation(Domain::disk(), 1.0);
  for (int i = 0; i < trials; ++i) {
    const HardyFunction f(random_polynomial(seed, i));
    const auto tf = compose_trace(f, id, n_samples), tc = compose_trace(f, phi, n_samples);
    const double nf = tf.norm(p);
    const double d = rel_dev(tc.norm(p), nf);
    if (d > dev) dev = d, witness = i;
    cd mf{}, mc{};
    for (int k = 0; k < n_samples; ++k) {
      mf += tf.outer.samples()[static_cast<std::size_t>(k)];
      mc += tc.outer.samples()[static_cast<std::size_t>(k)];
    }
    mean_dev = std::max(mean_dev, std::abs(mc - mf) / n_samples / nf);
  }
  r.add("abs_phi0", a);
  r.add("min_boundary_modulus", min_mod);
  r.add("norm_deviation", dev);
  r.add("mean_identity_deviation", mean_dev);
  r.add("p", p);
  r.tol("inner_symbol", tol.inner_symbol);
  r.tol("isometry", tol.isometry);
  r.tol("witness", tol.witness);
  const bool cond = a < tol.inner_symbol && min_mod > 1.0 - tol.inner_symbol;
  r.verdict = cond;
  if (nu_context)
    r.status = cond ? "NECESSARY-CONDITIONS-MET" : "VIOLATED";
  else
    r.status = cond ? "isometry" : "not an isometry";
  if (cond && (dev >= tol.isometry || mean_dev >= tol.isometry)) r.notes.push_back("inconsistent: characterization holds but norms are not preserved");
  if (!cond) {
    if (dev > tol.witness) {
      r.add("witness_trial", witness);
      r.add("witness_deviation", dev);
    } else {
      r.notes.push_back("inconsistent: no witness input with deviation above the witness threshold");
    }
  }
  return r;
}

DiagnosticsReport isometry_check_annulus(const AnalyticSelfMap& phi, double p, int trials, std::uint64_t seed,
                                         int n_samples, const Tolerances& tol) {
  const Domain& src = phi.source();
  if (src.is_disk() || phi.target() != src) throw PreconditionError("isometry_check_annulus: annulus self-maps only");
  const double r0 = src.inner_radius;
  DiagnosticsReport r;
  r.name = "isometry_annulus";

  // Least-squares fits to lambda z and mu r0 / z on both circles, unimodular.
  const int nb = 1024;
  cd num_rot{}, num_inv{};
  double den_rot = 0.0, den_inv = 0.0;
  std::vector<std::pair<cd, cd>> pts;
  for (double rad : {1.0, r0})
    for (int k = 0; k < nb; ++k) {
      const cd z = std::polar(rad, CircleGrid::angle(k, nb));
      const cd w = phi(z);
      pts.emplace_back(z, w);
      num_rot += w * std::conj(z);
      den_rot += std::norm(z);
      num_inv += w * std::conj(r0 / z);
      den_inv += std::norm(r0 / z);
    }
  auto unit = [](cd c) { return std::abs(c) > 0.0 ? c / std::abs(c) : cd{1.0}; };
  const cd lam = unit(num_rot / den_rot), mu = unit(num_inv / den_inv);
  double d_rot = 0.0, d_inv = 0.0;
  for (const auto& [z, w] : pts) {
    d_rot = std::max(d_rot, std::abs(w - lam * z));
    d_inv = std::max(d_inv, std::abs(w - mu * r0 / z));
  }
  r.add("rotation_fit", d_rot);
  r.add("inversion_fit", d_inv);
  r.add("lambda_arg", std::arg(lam));
  r.add("mu_arg", std::arg(mu));

  const auto om = omega_measures(phi, tol.omega_level);
  r.add("m_r0_on_inner", om.m_r0_on_inner);
  r.add("m_r0_on_outer", om.m_r0_on_outer);
  r.add("m_1_on_inner", om.m_1_on_inner);
  r.add("m_1_on_outer", om.m_1_on_outer);
  r.add("omega_reliable", om.reliable ? 1.0 : 0.0);
  const auto cls = classify_case(om, tol.omega_level, tol.omega_case3);
  r.notes.push_back("case: " + case_name(cls));
  r.add("case", static_cast<double>(static_cast<int>(cls)));

  double dev = 0.0;
  int witness = -1;
  const auto id = AnalyticSelfMap::rotation(src, 1.0);
  for (int i = 0; i < trials; ++i) {
    const HardyFunction f(random_laurent(seed, i, r0));
    const double d = rel_dev(compose_trace(f, phi, n_samples).norm(p), compose_trace(f, id, n_samples).norm(p));
    if (d > dev) dev = d, witness = i;
  }
  r.add("norm_deviation", dev);
  r.add("p", p);
  r.tol("family_fit", tol.family_fit);
  r.tol("isometry", tol.isometry);
  r.tol("witness", tol.witness);
  r.tol("omega_level", tol.omega_level);

  const bool rot = d_rot < tol.family_fit, inv = d_inv < tol.family_fit;
  r.verdict = rot || inv;
  r.status = rot ? "isometry (rotation)" : inv ? "isometry (twisted inversion)" : "not an isometry";
  if (r.verdict && dev >= tol.isometry) r.notes.push_back("inconsistent: family fit holds but norms are not preserved");
  if (!r.verdict) {
    if (dev > tol.witness) {
      r.add("witness_trial", witness);
      r.add("witness_deviation", dev);
    } else {
      r.notes.push_back("inconsistent: no witness input with deviation above the witness threshold");
    }
  }
  return r;
}

std::optional<int> winding_count(const AnalyticSelfMap& phi, cd a, int n_samples, double skip) {
  const Domain& src = phi.source();
  double total = 0.0;
  auto circle = [&](double rad, double orient) -> bool {
    cd prev = phi(rad) - a;
    if (std::abs(prev) < skip) return false;
    double acc = 0.0;
    for (int k = 1; k <= n_samples; ++k) {
      const cd cur = phi(std::polar(rad, orient * CircleGrid::angle(k, n_samples))) - a;
      if (std::abs(cur) < skip) return false;
      acc += std::arg(cur / prev);
      prev = cur;
    }
    total += acc;
    return true;
  };
  if (!circle(1.0, 1.0)) return std::nullopt;
  if (!src.is_disk() && !circle(src.inner_radius, -1.0)) return std::nullopt;
  return static_cast<int>(std::lround(total / kTwoPi));
}

DiagnosticsReport invertibility_check(const AnalyticSelfMap& phi, const Tolerances& tol) {
  DiagnosticsReport r;
  r.name = "invertibility";
  const Domain& tgt = phi.target();
  int lo = 1 << 30, hi = -1, skipped = 0, tested = 0;
  auto& xs = r.series["target_re"];
  auto& ys = r.series["target_im"];
  auto& cs = r.series["count"];
  for (int i = 1; i <= 7; ++i)
    for (int j = 0; j < 16; ++j) {
      const cd a = std::polar(0.125 * i, kTwoPi * j / 16);
      if (!tgt.contains(a) || (!tgt.is_disk() && std::abs(a) < tgt.inner_radius + tol.winding_skip)) continue;
      const auto c = winding_count(phi, a, tol.winding_samples, tol.winding_skip);
      if (!c) {
        ++skipped;
        continue;
      }
      ++tested;
      lo = std::min(lo, *c);
      hi = std::max(hi, *c);
      xs.push_back(a.real());
      ys.push_back(a.imag());
      cs.push_back(*c);
    }
  const bool injective = tested > 0 && hi <= 1, surjective = tested > 0 && lo >= 1;
  r.add("targets_tested", tested);
  r.add("targets_skipped", skipped);
  r.add("min_count", tested ? lo : 0);
  r.add("max_count", tested ? hi : 0);
  r.add("injective", injective);
  r.add("surjective", surjective);
  r.tol("winding_skip", tol.winding_skip);
  r.tol("winding_samples", tol.winding_samples);
  r.verdict = injective && surjective;
  r.status = r.verdict ? "invertible" : !injective && !surjective ? "neither injective nor surjective"
                                     : !injective                 ? "not injective"
                                                                  : "not surjective";
  return r;
}

CompactProxy compact_proxy(const AnalyticSelfMap& phi, int M, cd alpha, GridSpec grid, const Tolerances& tol) {
  if (!phi.source().is_disk() || !phi.target().is_disk()) throw PreconditionError("compact_proxy: disk symbols only");
  CompactProxy out;
  DiagnosticsReport& r = out.report;
  r.name = "compact_proxy";
  {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix_truncate(phi, M).entries);
    const auto& s = svd.singularValues();
    out.sigma.assign(s.data(), s.data() + s.size());
  }
  // Full-L2 output: the columns are boundary samples of (weight) phi^n.
  const int N = 1024;
  Eigen::MatrixXcd A(N, M);
  std::vector<cd> vals(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) vals[static_cast<std::size_t>(k)] = phi(std::polar(1.0, CircleGrid::angle(k, N)));
  for (int k = 0; k < N; ++k)
    for (int n = 0; n < M; ++n) A(k, n) = std::pow(vals[static_cast<std::size_t>(k)], n) / std::sqrt(double(N));
  {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    const auto& s = svd.singularValues();
    out.sigma_l2.assign(s.data(), s.data() + s.size());
  }
  r.series["sigma"] = out.sigma;

  if (alpha != cd{}) {
    const MeshPtr mesh = PolarMesh::make(Domain::disk(), grid);
    const auto h = hard_factorize(PolarGrid::from_function(mesh, [](cd) { return cd{1.0}; }), AlphaField::constant(mesh, alpha), tol);
    out.s_sup = h.s.sup_norm;
    // Inputs e^s z^n have trace norm ||z^n|| since Re s = 0 on T; outputs are e^{s o phi} phi^n.
    Eigen::MatrixXcd G = A;
    for (int k = 0; k < N; ++k) {
      const cd w = vals[static_cast<std::size_t>(k)];
      G.row(k) *= std::exp(h.s.values.evaluate(w));
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
    const auto& s = svd.singularValues();
    out.sigma_generalized.assign(s.data(), s.data() + s.size());
    double worst = 0.0;
    const double e = std::exp(out.s_sup);
    for (int k = 0; k < M; ++k) {
      const double a = out.sigma_l2[static_cast<std::size_t>(k)], g = out.sigma_generalized[static_cast<std::size_t>(k)];
      if (a < 1e-300) continue;
      // Violation of a / e <= g <= a e, in units of a (0 when inside).
      worst = std::max(worst, std::max(g - a * e, a / e - g) / a);
    }
    r.add("s_sup", out.s_sup);
    r.add("s_boundary_real_max", h.s.boundary_real_max);
    r.add("conjugation_violation", std::max(worst, 0.0));
    r.series["sigma_generalized"] = out.sigma_generalized;
  }

  // Geometric fit of log sigma_k over the numerically nonzero values.
  std::vector<double> ks, ls;
  for (int k = 0; k < M; ++k)
    if (out.sigma[static_cast<std::size_t>(k)] > 1e-14 * out.sigma[0]) {
      ks.push_back(k);
      ls.push_back(std::log(out.sigma[static_cast<std::size_t>(k)]));
    }
  double rho = 1.0;
  if (ks.size() >= 2) {
    const double n = double(ks.size());
    double sk = 0, sl = 0, skk = 0, skl = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) sk += ks[i], sl += ls[i], skk += ks[i] * ks[i], skl += ks[i] * ls[i];
    rho = std::exp((n * skl - sk * sl) / (n * skk - sk * sk));
  }
  const double mid = out.sigma[static_cast<std::size_t>(M / 2 > 0 ? M / 2 - 1 : 0)];
  r.add("sigma_max", out.sigma.front());
  r.add("sigma_mid", mid);
  r.add("decay_rate", rho);
  r.add("truncation_M", M);
  r.verdict = mid < 1e-3 * out.sigma.front();
  r.status = r.verdict ? "compact-like" : "non-compact-like";
  r.notes.push_back("proxy only: a finite section cannot certify compactness");
  return out;
}

double eval_functional_norm(cd z, double p, int M) {
  if (!(std::abs(z) < 1.0)) throw DomainError("eval_functional_norm: z must lie in the open disk");
  if (!(p > 1.0)) throw std::invalid_argument("eval_functional_norm: p must exceed 1");
  const double q = std::norm(z);
  if (p == 2.0) {
    double s = 0.0, t = 1.0;
    for (int n = 0; n < M; ++n, t *= q) s += t;
    return std::sqrt(s);
  }
  // Minimize ||f||_p subject to f(z) = 1 by reweighted least squares.
  int N = 256;
  while (N < 4 * M) N *= 2;
  Eigen::MatrixXcd B(N, M);
  for (int k = 0; k < N; ++k)
    for (int n = 0; n < M; ++n) B(k, n) = std::polar(1.0, n * CircleGrid::angle(k, N));
  Eigen::VectorXcd v(M);
  cd zn = 1.0;
  for (int n = 0; n < M; ++n, zn *= z) v(n) = std::conj(zn);
  // Steps damped by 1/(p - 1) above p = 2; plain reweighting oscillates for p >= 3.
  const double damp = p > 2.0 ? 1.0 / (p - 1.0) : 1.0;
  Eigen::VectorXd w = Eigen::VectorXd::Ones(N);
  Eigen::VectorXcd c;
  double prev = 0.0;
  for (int it = 0; it < 2000; ++it) {
    const Eigen::MatrixXcd G = B.adjoint() * w.cast<cd>().asDiagonal() * B / double(N);
    const Eigen::VectorXcd y = G.ldlt().solve(v);
    const Eigen::VectorXcd cand = y / (v.adjoint() * y)(0);  // f(z) = sum c_n z^n = 1
    c = it == 0 ? cand : Eigen::VectorXcd(c + damp * (cand - c));
    const Eigen::VectorXcd f = B * c;
    double np = 0.0;
    for (int k = 0; k < N; ++k) np += std::pow(std::abs(f(k)), p);
    const double val = 1.0 / std::pow(np / N, 1.0 / p);
    if (it > 0 && std::abs(val - prev) < 1e-14 * val) return val;
    prev = val;
    for (int k = 0; k < N; ++k) w(k) = std::pow(std::max(std::abs(f(k)), 1e-12), p - 2.0);
  }
  return prev;
}

DiagnosticsReport adjoint_identity_check(const AnalyticSelfMap& phi, cd z, const HardyFunction& f, int n_samples) {
  if (!phi.source().contains(z)) throw DomainError("adjoint_identity_check: z must be interior");
  DiagnosticsReport r;
  r.name = "adjoint_identity";
  const auto tr = compose_trace(f, phi, n_samples);
  const auto c = analyze(tr.outer);
  // Coefficients n >= 0 from the outer trace. On the annulus, n < 0 come from the
  // inner one, where sample noise is damped by (r0/|z|)^{|n|} instead of amplified.
  cd composed{};
  for (int n = c.max_index(); n >= 0; --n) composed = composed * z + c[n];
  if (!phi.source().is_disk()) {
    const double r0 = phi.source().inner_radius;
    const auto ci = analyze(*tr.inner);
    cd neg{};
    for (int n = ci.min_index(); n < 0; ++n) neg = neg * (r0 / z) + ci[n];
    composed += neg * (r0 / z);
  }
  const cd direct = f(phi(z));
  r.add("composed_re", composed.real());
  r.add("composed_im", composed.imag());
  r.add("direct_re", direct.real());
  r.add("direct_im", direct.imag());
  r.add("discrepancy_re", std::abs(composed.real() - direct.real()));
  r.add("discrepancy_im", std::abs(composed.imag() - direct.imag()));
  r.tol("adjoint", 1e-10);
  r.verdict = std::abs(composed - direct) < 1e-10 * std::max(1.0, std::abs(direct));
  r.status = r.verdict ? "identity holds" : "identity violated";
  return r;
}

DiagnosticsReport adjoint_identity_check(const AnalyticSelfMap& phi, cd z, const GenHardyFunction& f) {
  if (!phi.source().contains(z)) throw DomainError("adjoint_identity_check: z must be interior");
  DiagnosticsReport r;
  r.name = "adjoint_identity";
  const MeshPtr src = PolarMesh::make(phi.source(), {f.values.n_r(), f.values.n_theta()});
  const cd composed = compose_grid(f.values, phi, src).evaluate(z);
  const cd direct = f.values.evaluate(phi(z));
  r.add("composed_re", composed.real());
  r.add("composed_im", composed.imag());
  r.add("direct_re", direct.real());
  r.add("direct_im", direct.imag());
  r.add("discrepancy_re", std::abs(composed.real() - direct.real()));
  r.add("discrepancy_im", std::abs(composed.imag() - direct.imag()));
  r.tol("adjoint", 1e-10);
  r.verdict = std::abs(composed - direct) < 1e-10 * std::max(1.0, std::abs(direct));
  r.status = r.verdict ? "identity holds" : "identity violated";
  return r;
}

}  // namespace hardy
