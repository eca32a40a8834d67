#include "hardy/beltrami.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "hardy/error.hpp"
#include "hardy/kernels.hpp"

namespace hardy {

namespace {

std::atomic<bool> g_alpha_mutation{false};

std::vector<double> real_parts(const PolarGrid& g) {
  std::vector<double> v(static_cast<std::size_t>(g.values.size()));
  for (Eigen::Index j = 0; j < g.values.size(); ++j) v[static_cast<std::size_t>(j)] = g.values.data()[j].real();
  return v;
}

std::span<const cd> flat(const PolarGrid& g) { return {g.values.data(), static_cast<std::size_t>(g.values.size())}; }
std::span<cd> flat(PolarGrid& g) { return {g.values.data(), static_cast<std::size_t>(g.values.size())}; }

double max_boundary_real(const PolarGrid& s) {
  double m = 0.0;
  for (int i = 0; i < s.n_r(); ++i)
    if (s.mesh->is_boundary_row(i)) m = std::max(m, s.values.row(i).real().cwiseAbs().maxCoeff());
  return m;
}

void require_same_mesh(const PolarGrid& a, const PolarGrid& b, const char* who) {
  if (a.mesh != b.mesh && (a.n_r() != b.n_r() || a.n_theta() != b.n_theta() || a.domain() != b.domain()))
    throw std::invalid_argument(std::string(who) + ": fields live on different meshes");
}

// Value at the origin of a disk field (mode-0 profile at r = 0).
cd value_at_origin(const PolarGrid& f) {
  const FieldMatrix modes = to_modes(f);
  const Eigen::RowVectorXd row = f.mesh->interpolation_row(0.0, 0);
  cd v{};
  for (int i = 0; i < f.n_r(); ++i) v += row(i) * modes(i, 0);
  return v;
}

/// Analytic h (single valued) with Re h = d_outer on |z| = 1 and, on the annulus,
/// Re h = d_inner on |z| = r0. The mode-0 condition on the annulus is not
/// solvable in general; h then matches the outer mean and `mismatch` records
/// mean(d_outer) - mean(d_inner). h has zero imaginary constant.
struct AnalyticFit {
  PolarGrid h;
  double mismatch = 0.0;
};

AnalyticFit analytic_with_real_trace(const MeshPtr& mesh, std::span<const double> d_outer,
                                     std::span<const double> d_inner = {}) {
  const int N = mesh->n_theta(), half = N / 2;
  std::vector<cd> so(d_outer.begin(), d_outer.end()), co(static_cast<std::size_t>(N));
  fft_forward(so, co);
  for (cd& v : co) v /= double(N);
  FieldMatrix modes = FieldMatrix::Zero(mesh->n_r(), N);
  AnalyticFit fit{PolarGrid(mesh), 0.0};
  if (mesh->domain().is_disk()) {
    for (int i = 0; i < mesh->n_r(); ++i) {
      const double r = mesh->radius(i);
      modes(i, 0) = co[0].real();
      double rm = 1.0;
      for (int m = 1; m <= half; ++m) {
        rm *= r;
        if (m < half)
          modes(i, m) = 2.0 * co[static_cast<std::size_t>(m)] * rm;
        else
          modes(i, half) = co[static_cast<std::size_t>(half)].real() * rm;
      }
    }
  } else {
    const double r0 = mesh->domain().inner_radius;
    std::vector<cd> si(d_inner.begin(), d_inner.end()), ci(static_cast<std::size_t>(N));
    fft_forward(si, ci);
    for (cd& v : ci) v /= double(N);
    fit.mismatch = co[0].real() - ci[0].real();
    std::vector<cd> A(static_cast<std::size_t>(half + 1)), Bt(static_cast<std::size_t>(half + 1));
    for (int m = 1; m <= half; ++m) {
      const double w = m == half ? 1.0 : 2.0;
      const cd to = w * co[static_cast<std::size_t>(m)], ti = w * ci[static_cast<std::size_t>(m)];
      const double rm = std::pow(r0, m);
      Bt[static_cast<std::size_t>(m)] = (ti - to * rm) / (1.0 - rm * rm);
      A[static_cast<std::size_t>(m)] = to - Bt[static_cast<std::size_t>(m)] * rm;
    }
    for (int i = 0; i < mesh->n_r(); ++i) {
      const double r = mesh->radius(i);
      modes(i, 0) = co[0].real();
      for (int m = 1; m <= half; ++m) {
        const cd pos = A[static_cast<std::size_t>(m)] * std::pow(r, m);
        const cd neg = std::conj(Bt[static_cast<std::size_t>(m)]) * std::pow(r0 / r, m);
        if (m == half) {
          modes(i, half) = cd{(pos + neg).real(), 0.0};
        } else {
          modes(i, m) = pos;
          modes(i, N - m) = neg;
        }
      }
    }
  }
  fit.h = from_modes(mesh, modes);
  return fit;
}

std::vector<double> row_real(const PolarGrid& g, int i) {
  std::vector<double> v(static_cast<std::size_t>(g.n_theta()));
  for (int k = 0; k < g.n_theta(); ++k) v[static_cast<std::size_t>(k)] = g.values(i, k).real();
  return v;
}
std::vector<double> row_imag(const PolarGrid& g, int i) {
  std::vector<double> v(static_cast<std::size_t>(g.n_theta()));
  for (int k = 0; k < g.n_theta(); ++k) v[static_cast<std::size_t>(k)] = g.values(i, k).imag();
  return v;
}
std::vector<double> negated(std::vector<double> v) {
  for (double& x : v) x = -x;
  return v;
}

double mean_imag_row(const PolarGrid& g, int i) { return g.values.row(i).imag().mean(); }

}  // namespace

// ---------------------------------------------------------------- fields

NuField NuField::from_grid(PolarGrid values, double kappa) {
  if (!(kappa >= 0.0 && kappa < 1.0)) throw std::invalid_argument("NuField: kappa must lie in [0, 1)");
  values.values = values.values.real().cast<cd>();
  const double sup = values.values.real().cwiseAbs().maxCoeff();
  if (sup > kappa) {
    std::ostringstream msg;
    msg << "NuField: sup |nu| = " << sup << " exceeds kappa = " << kappa;
    throw std::invalid_argument(msg.str());
  }
  const PolarGrid d = holo_derivative(values);
  const double lip = 2.0 * d.values.cwiseAbs().maxCoeff();
  return NuField{std::move(values), kappa, lip, {}};
}

NuField NuField::constant(MeshPtr mesh, double c, double kappa) {
  return from_function(std::move(mesh), kappa, [c](cd) { return c; });
}

NuField NuField::affine(MeshPtr mesh, double a, double bx, double by, double kappa) {
  return from_function(std::move(mesh), kappa, [a, bx, by](cd z) { return a + bx * z.real() + by * z.imag(); });
}

NuField NuField::radial(MeshPtr mesh, double c, double kappa) {
  return from_function(std::move(mesh), kappa, [c](cd z) { return c * std::min(std::norm(z), 1.0); });
}

double NuField::operator()(cd z) const { return exact ? exact(z) : values.evaluate(z).real(); }

AlphaField AlphaField::from_grid(PolarGrid values) {
  const double sup = values.max_abs();
  if (!std::isfinite(sup)) throw std::invalid_argument("AlphaField: non-finite values");
  return {std::move(values), sup};
}

AlphaField AlphaField::constant(MeshPtr mesh, cd c) {
  return from_grid(PolarGrid::from_function(std::move(mesh), [c](cd) { return c; }));
}

SField SField::from_grid(PolarGrid values) {
  const double b = max_boundary_real(values);
  const double sup = values.max_abs();
  return {std::move(values), b, sup};
}

// ---------------------------------------------------------------- residuals

double pde_residual(const PolarGrid& u, const PolarGrid& coeff, GenKind kind) {
  require_same_mesh(u, coeff, "pde_residual");
  const auto w = wirtinger(u);
  PolarGrid r = w.dbar;
  if (kind == GenKind::F)
    r.values -= (coeff.values.array() * w.d.values.conjugate().array()).matrix();
  else
    r.values -= (coeff.values.array() * u.values.conjugate().array()).matrix();
  return l2_norm(r) / (1.0 + l2_norm(u));
}

GenHardyFunction make_f(PolarGrid values, const NuField& nu) {
  const double res = pde_residual(values, nu.values, GenKind::F);
  return {GenKind::F, std::move(values), nu.values, res};
}

GenHardyFunction make_w(PolarGrid values, const AlphaField& alpha) {
  const double res = pde_residual(values, alpha.values, GenKind::W);
  return {GenKind::W, std::move(values), alpha.values, res};
}

// ---------------------------------------------------------------- alpha, J

namespace detail {
void set_alpha_sign_mutation(bool on) { g_alpha_mutation = on; }
bool alpha_sign_mutation() { return g_alpha_mutation; }

AlphaField alpha_from_nu_signed(const NuField& nu, int sign) {
  PolarGrid a = dbar(nu.values);
  for (int i = 0; i < a.n_r(); ++i)
    for (int k = 0; k < a.n_theta(); ++k) {
      const double v = nu.values.values(i, k).real();
      a.values(i, k) *= -static_cast<double>(sign) / (1.0 - v * v);
    }
  return AlphaField::from_grid(std::move(a));
}
}  // namespace detail

AlphaField alpha_from_nu(const NuField& nu) {
  return detail::alpha_from_nu_signed(nu, detail::alpha_sign_mutation() ? -1 : 1);
}

cd jmap_point(cd f, double nu) { return (f - nu * std::conj(f)) / std::sqrt(1.0 - nu * nu); }
cd jinv_point(cd w, double nu) { return (w + nu * std::conj(w)) / std::sqrt(1.0 - nu * nu); }

GenHardyFunction jmap(const GenHardyFunction& f, const NuField& nu) {
  if (f.kind != GenKind::F) throw std::invalid_argument("jmap expects an f-type function");
  require_same_mesh(f.values, nu.values, "jmap");
  PolarGrid w(f.values.mesh);
  const auto n = real_parts(nu.values);
  kernels::beltrami_twist(flat(f.values), n, +1, flat(w));
  return make_w(std::move(w), alpha_from_nu(nu));
}

GenHardyFunction jinv(const GenHardyFunction& w, const NuField& nu) {
  if (w.kind != GenKind::W) throw std::invalid_argument("jinv expects a w-type function");
  require_same_mesh(w.values, nu.values, "jinv");
  PolarGrid f(w.values.mesh);
  const auto n = real_parts(nu.values);
  kernels::beltrami_twist(flat(w.values), n, -1, flat(f));
  return make_f(std::move(f), nu);
}

// ---------------------------------------------------------------- composition

PolarGrid compose_grid(const PolarGrid& f, const AnalyticSelfMap& phi, MeshPtr mesh) {
  if (mesh->domain() != phi.source()) throw PreconditionError("compose_grid: mesh is not on the symbol's source domain");
  std::vector<cd> pts;
  pts.reserve(static_cast<std::size_t>(mesh->n_r() * mesh->n_theta()));
  for (int i = 0; i < mesh->n_r(); ++i)
    for (int k = 0; k < mesh->n_theta(); ++k) {
      const cd w = phi(mesh->point(i, k));
      if (!f.domain().contains_closed(w, 1e-12)) {
        std::ostringstream msg;
        msg << "compose_grid: phi(" << mesh->point(i, k) << ") = " << w << " lies outside the field's domain";
        throw PreconditionError(msg.str());
      }
      pts.push_back(w);
    }
  const auto vals = f.evaluate(pts);
  PolarGrid out(mesh);
  std::copy(vals.begin(), vals.end(), out.values.data());
  return out;
}

NuField compose_nu(const NuField& nu, const AnalyticSelfMap& phi, MeshPtr mesh) {
  if (nu.exact) {
    auto e = nu.exact;
    for (int i = 0; i < mesh->n_r(); ++i)
      for (int k = 0; k < mesh->n_theta(); ++k)
        if (!nu.values.domain().contains_closed(phi(mesh->point(i, k)), 1e-12))
          throw PreconditionError("compose_nu: phi leaves nu's domain");
    return NuField::from_function(mesh, nu.kappa, [e, phi](cd z) { return e(phi(z)); });
  }
  return NuField::from_grid(compose_grid(nu.values, phi, mesh), nu.kappa);
}

AlphaField alpha_pullback(const AlphaField& alpha, const AnalyticSelfMap& phi, MeshPtr mesh) {
  PolarGrid a = compose_grid(alpha.values, phi, mesh);
  for (int i = 0; i < mesh->n_r(); ++i)
    for (int k = 0; k < mesh->n_theta(); ++k) a.values(i, k) *= std::conj(phi.derivative(mesh->point(i, k)));
  return AlphaField::from_grid(std::move(a));
}

// ---------------------------------------------------------------- factorizations

EasyFactor easy_factorize(const GenHardyFunction& w, const AlphaField& alpha, EasyNormalization norm,
                          const Tolerances& tol) {
  require_same_mesh(w.values, alpha.values, "easy_factorize");
  const MeshPtr& mesh = w.values.mesh;
  const double wmin = w.values.values.cwiseAbs().minCoeff();
  if (!(wmin > tol.zero_free_floor)) {
    std::ostringstream msg;
    msg << "easy_factorize: w vanishes on the grid (min |w| = " << wmin << ")";
    throw UnsupportedInput(msg.str());
  }
  PolarGrid g(mesh);
  g.values = (alpha.values.values.array() * w.values.values.conjugate().array() / w.values.values.array()).matrix();
  PolarGrid s = cauchy_area_transform(g, -1.0).s;
  const int outer = mesh->outer_row();
  const bool disk = mesh->domain().is_disk();

  if (norm == EasyNormalization::ImagConstant) {
    // s += i H, Re H = c_j - Im s_p on circle j, c_outer + c_inner = 0.
    auto d_o = negated(row_imag(s, outer));
    std::vector<double> d_i;
    if (!disk) {
      d_i = negated(row_imag(s, 0));
      const double c = (mean_imag_row(s, outer) - mean_imag_row(s, 0)) / 2.0;
      for (double& x : d_o) x += c;
      for (double& x : d_i) x -= c;
    }
    const auto fit = analytic_with_real_trace(mesh, d_o, d_i);
    s.values += cd{0.0, 1.0} * fit.h.values;
  } else {
    const auto fit = analytic_with_real_trace(mesh, negated(row_real(s, outer)),
                                              disk ? std::vector<double>{} : negated(row_real(s, 0)));
    s.values += fit.h.values;
    s.values.array() -= cd{0.0, mean_imag_row(s, outer)};
  }

  PolarGrid F(mesh);
  F.values = (w.values.values.array() * (-s.values.array()).exp()).matrix();
  const double ares = l2_norm(dbar(F)) / (1.0 + l2_norm(F));
  EasyFactor out{SField::from_grid(std::move(s)), std::move(F), ares, 0.0, 0.0, 0.0};
  out.c_outer = mean_imag_row(out.s.values, outer);
  out.c_inner = disk ? 0.0 : mean_imag_row(out.s.values, 0);
  out.s_over_alpha = alpha.sup_norm > 0.0 ? out.s.sup_norm / alpha.sup_norm : 0.0;
  return out;
}

namespace {

// Picard iteration for phi = Im s at a fixed outer mean gamma of phi. Re s is
// zero on the outer circle; on the annulus the inner circle carries the
// constant Re s = `inner_offset`, which vanishes only for the right gamma.
struct PicardSolve {
  PolarGrid s;
  Eigen::MatrixXd phi;
  double inner_offset = 0.0;
  std::vector<double> history;
  bool converged = false;
};

PicardSolve picard_fixed_gamma(const PolarGrid& aF, Eigen::MatrixXd phi, double gamma, const Tolerances& tol) {
  const MeshPtr& mesh = aF.mesh;
  const bool disk = mesh->domain().is_disk();
  const int outer = mesh->outer_row();
  PicardSolve out{PolarGrid(mesh), {}, 0.0, {}, false};
  for (int it = 0; it < tol.hard_max_iterations; ++it) {
    PolarGrid g(mesh);
    g.values = (aF.values.array() * (cd{0.0, -2.0} * phi.cast<cd>().array()).exp()).matrix();
    PolarGrid s = cauchy_area_transform(g, -1.0).s;
    const auto fit = analytic_with_real_trace(mesh, negated(row_real(s, outer)),
                                              disk ? std::vector<double>{} : negated(row_real(s, 0)));
    s.values += fit.h.values;
    s.values.array() += cd{0.0, gamma - mean_imag_row(s, outer)};
    Eigen::MatrixXd next = s.values.imag();
    const double step = (next - phi).cwiseAbs().maxCoeff();
    out.history.push_back(step);
    phi = std::move(next);
    out.s = std::move(s);
    out.inner_offset = disk ? 0.0 : out.s.values.row(0).real().mean();
    if (!std::isfinite(step)) break;
    if (step < tol.picard_step) {
      out.converged = true;
      break;
    }
  }
  out.phi = std::move(phi);
  return out;
}

}  // namespace

HardFactor hard_factorize(const PolarGrid& F, const AlphaField& alpha, const Tolerances& tol, bool allow_zeros) {
  require_same_mesh(F, alpha.values, "hard_factorize");
  const MeshPtr& mesh = alpha.values.mesh;
  const bool disk = mesh->domain().is_disk();

  const double fmin = F.values.cwiseAbs().minCoeff();
  if (!allow_zeros && !(fmin > tol.zero_free_floor)) {
    std::ostringstream msg;
    msg << "hard_factorize: F vanishes on the grid (min |F| = " << fmin << ")";
    throw UnsupportedInput(msg.str());
  }
  PolarGrid aF(mesh);
  for (Eigen::Index j = 0; j < F.values.size(); ++j) {
    const cd f = F.values.data()[j];
    aF.values.data()[j] = std::abs(f) > tol.zero_free_floor ? alpha.values.values.data()[j] * std::conj(f) / f : cd{};
  }

  std::vector<double> history;
  int iterations = 0;
  auto fail = [&](const char* why) {
    std::ostringstream msg;
    msg << "hard_factorize: " << why << " (last update " << (history.empty() ? 0.0 : history.back()) << ")";
    throw ConvergenceError(msg.str(), history);
  };
  auto solve = [&](double gamma, Eigen::MatrixXd phi0) {
    auto r = picard_fixed_gamma(aF, std::move(phi0), gamma, tol);
    history.insert(history.end(), r.history.begin(), r.history.end());
    iterations = std::max(iterations, static_cast<int>(r.history.size()));
    if (!r.converged) fail("Picard iteration did not converge");
    return r;
  };

  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(mesh->n_r(), mesh->n_theta());
  PolarGrid s(mesh);
  if (alpha.sup_norm > 0.0) {
    PicardSolve best = solve(0.0, zero);
    if (!disk && std::abs(best.inner_offset) > tol.picard_step) {
      // The outer mean gamma of Im s should make Re s vanish on the inner
      // circle as well. The offset is pi-periodic in gamma and need not change
      // sign: Re of the integral of dbar s / z over the annulus is a second
      // order quantity in alpha that gamma cannot move. Without a root, keep
      // the gamma of least offset and let boundary_real_max report it.
      const int n_scan = 16;
      std::vector<double> gs(n_scan + 1);
      std::vector<PicardSolve> sol;
      sol.reserve(n_scan + 1);
      for (int j = 0; j <= n_scan; ++j) {
        gs[static_cast<std::size_t>(j)] = -kPi / 2 + kPi * j / n_scan;
        if (j == n_scan / 2)
          sol.push_back(best);
        else
          sol.push_back(solve(gs[static_cast<std::size_t>(j)], zero.array() + gs[static_cast<std::size_t>(j)]));
      }
      int bracket = -1;
      for (int j = 0; j < n_scan; ++j) {
        const bool change = (sol[static_cast<std::size_t>(j)].inner_offset > 0) != (sol[static_cast<std::size_t>(j + 1)].inner_offset > 0);
        if (change && (bracket < 0 || std::abs(gs[static_cast<std::size_t>(j)] + gs[static_cast<std::size_t>(j + 1)]) <
                                          std::abs(gs[static_cast<std::size_t>(bracket)] + gs[static_cast<std::size_t>(bracket + 1)])))
          bracket = j;
      }
      if (bracket >= 0) {
        // Illinois regula falsi.
        double ga = gs[static_cast<std::size_t>(bracket)], gb = gs[static_cast<std::size_t>(bracket + 1)];
        PicardSolve at_a = sol[static_cast<std::size_t>(bracket)], at_b = sol[static_cast<std::size_t>(bracket + 1)];
        double fa = at_a.inner_offset, fb = at_b.inner_offset;
        int side = 0;
        best = std::abs(fa) < std::abs(fb) ? at_a : at_b;
        for (int k = 0; k < 100 && std::abs(best.inner_offset) > tol.picard_step && gb - ga > 1e-15; ++k) {
          const double g = (ga * fb - gb * fa) / (fb - fa);
          auto cur = solve(g, (at_a.phi.array() + (g - ga)).matrix());
          if ((cur.inner_offset > 0) == (fb > 0)) {
            gb = g, fb = cur.inner_offset, at_b = cur;
            if (side == -1) fa /= 2;
            side = -1;
          } else {
            ga = g, fa = cur.inner_offset, at_a = cur;
            if (side == +1) fb /= 2;
            side = +1;
          }
          if (std::abs(cur.inner_offset) < std::abs(best.inner_offset)) best = std::move(cur);
        }
      } else {
        // Golden section on |offset| around the best scan point.
        std::size_t jb = 0;
        for (std::size_t j = 0; j < sol.size(); ++j)
          if (std::abs(sol[j].inner_offset) < std::abs(sol[jb].inner_offset)) jb = j;
        best = sol[jb];
        const double h = kPi / n_scan;
        double lo = gs[jb] - h, hi = gs[jb] + h;
        const double q = (std::sqrt(5.0) - 1) / 2;
        auto at = [&](double g) { return solve(g, (sol[jb].phi.array() + (g - gs[jb])).matrix()); };
        double x1 = hi - q * (hi - lo), x2 = lo + q * (hi - lo);
        auto s1 = at(x1), s2 = at(x2);
        for (int k = 0; k < 40 && hi - lo > 1e-10; ++k) {
          if (std::abs(s1.inner_offset) < std::abs(s2.inner_offset)) {
            hi = x2, x2 = x1, s2 = std::move(s1);
            x1 = hi - q * (hi - lo), s1 = at(x1);
          } else {
            lo = x1, x1 = x2, s1 = std::move(s2);
            x2 = lo + q * (hi - lo), s2 = at(x2);
          }
        }
        for (auto* c : {&s1, &s2})
          if (std::abs(c->inner_offset) < std::abs(best.inner_offset)) best = std::move(*c);
      }
    }
    s = std::move(best.s);
  }
  PolarGrid w(mesh);
  w.values = (s.values.array().exp() * F.values.array()).matrix();
  const double res = pde_residual(w, alpha.values, GenKind::W);
  return {SField::from_grid(std::move(s)), std::move(w), res, iterations, std::move(history)};
}
Refactor refactor_alpha(const GenHardyFunction& w1, const AlphaField& alpha1, const AlphaField& alpha2,
                        const Tolerances& tol) {
  const auto e = easy_factorize(w1, alpha1, EasyNormalization::RealZero, tol);
  auto h = hard_factorize(e.F, alpha2, tol);
  PolarGrid s(w1.values.mesh);
  s.values = e.s.values.values - h.s.values.values;
  const double defect = (w1.values.values.array() - s.values.array().exp() * h.w.values.array()).abs().maxCoeff();
  const double denom = alpha1.sup_norm + alpha2.sup_norm;
  Refactor out{SField::from_grid(std::move(s)), std::move(h.w), h.w_residual, defect, 0.0};
  out.s_over_alphas = denom > 0.0 ? out.s.sup_norm / denom : 0.0;
  return out;
}

DirichletResult dirichlet_disk(const CircleGrid& psi_in, const NuField& nu, const Tolerances& tol) {
  const MeshPtr& mesh = nu.values.mesh;
  if (!mesh->domain().is_disk()) throw PreconditionError("dirichlet_disk: nu must live on the disk");
  const int N = mesh->n_theta();
  const CircleGrid psi = psi_in.n_samples() == N ? psi_in : synthesize(analyze(psi_in), N);
  std::vector<double> p(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) p[static_cast<std::size_t>(k)] = psi.samples()[static_cast<std::size_t>(k)].real();
  const int outer = mesh->outer_row();

  PolarGrid f = analytic_with_real_trace(mesh, p).h;
  std::vector<double> history;
  bool converged = nu.values.max_abs() == 0.0;
  int it = 0;
  for (; it < tol.dirichlet_max_iterations && !converged; ++it) {
    PolarGrid g(mesh);
    g.values = (nu.values.values.array() * holo_derivative(f).values.conjugate().array()).matrix();
    PolarGrid next = cauchy_area_transform(g, -1.0).s;
    auto d = row_real(next, outer);
    for (int k = 0; k < N; ++k) d[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k)] - d[static_cast<std::size_t>(k)];
    next.values += analytic_with_real_trace(mesh, d).h.values;
    next.values.array() -= cd{0.0, value_at_origin(next).imag()};
    const double step = (next.values - f.values).cwiseAbs().maxCoeff();
    history.push_back(step);
    f = std::move(next);
    if (!std::isfinite(step)) break;
    converged = step < tol.picard_step;
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "dirichlet_disk: no convergence after " << history.size() << " iterations";
    throw ConvergenceError(msg.str(), history);
  }
  double defect = 0.0;
  for (int k = 0; k < N; ++k) defect = std::max(defect, std::abs(f.values(outer, k).real() - p[static_cast<std::size_t>(k)]));
  return {make_f(std::move(f), nu), static_cast<int>(history.size()), defect, std::move(history)};
}

Witness separation_witness(cd z1, cd z2, const NuField& nu, const Tolerances& tol) {
  const MeshPtr& mesh = nu.values.mesh;
  const Domain& dom = mesh->domain();
  if (!dom.contains(z1) || !dom.contains(z2) || z1 == z2)
    throw PreconditionError("separation_witness: needs two distinct interior points");
  const PolarGrid F = PolarGrid::from_function(mesh, [z1](cd z) { return z - z1; });
  const AlphaField alpha = alpha_from_nu(nu);
  auto h = hard_factorize(F, alpha, tol, /*allow_zeros=*/true);
  const double w_res = h.w_residual;
  const cd s2 = h.s.values.evaluate(z2);
  const cd s1 = h.s.values.evaluate(z1);
  GenHardyFunction w{GenKind::W, std::move(h.w), alpha.values, w_res};
  GenHardyFunction f = jinv(w, nu);
  // Point values through the decomposition w = e^s F: F(z1) = 0 exactly.
  const cd f1 = jinv_point(std::exp(s1) * (z1 - z1), nu(z1));
  const cd f2 = jinv_point(std::exp(s2) * (z2 - z1), nu(z2));
  const double bound = (1.0 - nu.kappa) * std::abs(std::exp(s2)) * std::abs(z2 - z1);
  return {std::move(f), f1, f2, bound, w_res};
}

}  // namespace hardy
