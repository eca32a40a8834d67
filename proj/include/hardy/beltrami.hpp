#pragma once
// Conjugate Beltrami equation dbar f = nu conj(d f) and its companion
// dbar w = alpha conj(w): coefficient fields, the pointwise isomorphism J,
// pullbacks under composition, and the factorizations w = e^s F.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hardy/hardy_analytic.hpp"
#include "hardy/polar.hpp"
#include "hardy/symbol.hpp"
#include "hardy/tolerances.hpp"

namespace hardy {

/// Real dilation coefficient with sup |nu| <= kappa < 1.
struct NuField {
  PolarGrid values;  // real parts carry nu
  double kappa;
  double lipschitz;  // max |grad nu| on the grid (monitored, not enforced)
  std::function<double(cd)> exact;  // closed form, when known

  static NuField from_grid(PolarGrid values, double kappa);
  template <class F>
  static NuField from_function(MeshPtr mesh, double kappa, F&& f) {
    NuField n = from_grid(PolarGrid::from_function(mesh, [&](cd z) { return cd{f(z)}; }), kappa);
    n.exact = std::forward<F>(f);
    return n;
  }
  // Builtin families on the closed disk or annulus.
  static NuField constant(MeshPtr mesh, double c, double kappa);
  static NuField affine(MeshPtr mesh, double a, double bx, double by, double kappa);  // a + bx x + by y
  static NuField radial(MeshPtr mesh, double c, double kappa);                        // c |z|^2

  double operator()(cd z) const;  // exact when available, else spectral interpolation
};

struct AlphaField {
  PolarGrid values;
  double sup_norm;
  static AlphaField from_grid(PolarGrid values);
  static AlphaField constant(MeshPtr mesh, cd c);
};

/// s in w = e^s F, with the largest |Re s| over boundary rows.
struct SField {
  PolarGrid values;
  double boundary_real_max;
  double sup_norm;
  static SField from_grid(PolarGrid values);
};

enum class GenKind { F, W };  // f solves dbar f = nu conj(d f); w solves dbar w = alpha conj(w)

struct GenHardyFunction {
  GenKind kind;
  PolarGrid values;
  PolarGrid coeff;  // nu (F) or alpha (W) on the same mesh
  double residual;

  CircleGrid trace() const { return values.outer_trace(); }
  cd operator()(cd z) const { return values.evaluate(z); }
};

// ||dbar u - rhs|| / (1 + ||u||), rhs = coeff conj(d u) (F) or coeff conj(u) (W).
double pde_residual(const PolarGrid& u, const PolarGrid& coeff, GenKind kind);
GenHardyFunction make_f(PolarGrid values, const NuField& nu);
GenHardyFunction make_w(PolarGrid values, const AlphaField& alpha);

// alpha = -dbar(nu) / (1 - nu^2).
AlphaField alpha_from_nu(const NuField& nu);
namespace detail {
// sign = +1 reproduces alpha_from_nu; -1 is the sign-flipped mutant used by
// the self-test to check that the acceptance suite notices.
AlphaField alpha_from_nu_signed(const NuField& nu, int sign);
void set_alpha_sign_mutation(bool on);
bool alpha_sign_mutation();
}  // namespace detail

// w = (f - nu conj f)/sqrt(1 - nu^2) and its inverse f = (w + nu conj w)/sqrt(1 - nu^2).
GenHardyFunction jmap(const GenHardyFunction& f, const NuField& nu);
GenHardyFunction jinv(const GenHardyFunction& w, const NuField& nu);
cd jmap_point(cd f, double nu);
cd jinv_point(cd w, double nu);

// (f o phi) sampled on `mesh` (a mesh of phi's source domain).
PolarGrid compose_grid(const PolarGrid& f, const AnalyticSelfMap& phi, MeshPtr mesh);
NuField compose_nu(const NuField& nu, const AnalyticSelfMap& phi, MeshPtr mesh);
// alpha~(z) = alpha(phi(z)) conj(phi'(z)); throws PreconditionError if phi leaves alpha's domain.
AlphaField alpha_pullback(const AlphaField& alpha, const AnalyticSelfMap& phi, MeshPtr mesh);

struct EasyFactor {
  SField s;
  PolarGrid F;                // w e^{-s}
  double analytic_residual;   // ||dbar F|| / (1 + ||F||)
  double c_outer, c_inner;    // Im s on each boundary circle (inner unused on the disk)
  double s_over_alpha;        // ||s||_inf / ||alpha||_inf (0 when alpha = 0)
};
enum class EasyNormalization { ImagConstant, RealZero };
// Throws UnsupportedInput when min |w| falls below tol.zero_free_floor.
EasyFactor easy_factorize(const GenHardyFunction& w, const AlphaField& alpha,
                          EasyNormalization norm = EasyNormalization::ImagConstant, const Tolerances& tol = {});

struct HardFactor {
  SField s;
  PolarGrid w;                   // e^s F
  double w_residual;
  int iterations;
  std::vector<double> history;   // sup-norm update per iteration
};
// Picard iteration on phi = Im s for dbar s = alpha_F e^{-2 i phi}, alpha_F = alpha conj(F)/F,
// with Re s = 0 on every boundary circle. F is sampled on alpha's mesh.
// Throws ConvergenceError when the update does not fall below tol.picard_step.
HardFactor hard_factorize(const PolarGrid& F, const AlphaField& alpha, const Tolerances& tol = {},
                          bool allow_zeros = false);

struct Refactor {
  SField s;         // s1 - s2
  PolarGrid w2;
  double w2_residual;
  double identity_defect;  // max |w1 - e^s w2|
  double s_over_alphas;    // ||s||_inf / (||alpha1|| + ||alpha2||)
};
Refactor refactor_alpha(const GenHardyFunction& w1, const AlphaField& alpha1, const AlphaField& alpha2,
                        const Tolerances& tol = {});

struct DirichletResult {
  GenHardyFunction f;
  int iterations;
  double trace_defect;  // max |Re tr f - psi|
  std::vector<double> history;
};
// Disk: Re tr f = psi, Im f(0) = 0. psi is sampled at nu's n_theta angles.
DirichletResult dirichlet_disk(const CircleGrid& psi, const NuField& nu, const Tolerances& tol = {});

struct Witness {
  GenHardyFunction f;
  cd f_z1, f_z2;
  double lower_bound;    // (1 - kappa) |e^{s(z2)}| |z2 - z1|
  double w_residual;     // residual of e^s F (F has a zero, so this is reported only)
};
Witness separation_witness(cd z1, cd z2, const NuField& nu, const Tolerances& tol = {});

}  // namespace hardy
