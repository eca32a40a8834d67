#pragma once
// The strip A^ = {(r, t) : r0 < r < 1, t real} covering the annulus through
// (r, t) -> r e^{it}: modulus-automorphic functions, the kernel K, harmonic
// extensions, outer functions and the boundary level sets of a symbol.

#include <functional>
#include <string>
#include <vector>

#include "hardy/fourier.hpp"
#include "hardy/polar.hpp"
#include "hardy/symbol.hpp"
#include "hardy/tolerances.hpp"

namespace hardy {

/// Samples of F(r, t) for t in [0, 2 pi * periods), with F(r, t + 2 pi) = lambda F(r, t).
struct LiftedFunction {
  double r0;
  std::vector<double> radii;  // ascending, inside [r0, 1]
  int n_t;                    // samples per period
  int periods;
  FieldMatrix values;         // radii x (n_t * periods)
  cd multiplier{1.0, 0.0};
  double index = 0.0;         // in [0, 1), multiplier = e^{2 pi i index}
  std::function<cd(double, double)> exact;  // F(r, t), when available

  double t(int j) const noexcept { return kTwoPi * j / n_t; }
  // max | |F(r, t + 2 pi)| - |F(r, t)| | over overlapping samples.
  double automorphy_defect() const;
};

LiftedFunction lift(const AnalyticSelfMap& phi, int n_r = 17, int n_t = 64, int periods = 2);

// frac((mean log|F| on the outer line - mean on the inner line) / q0).
double index_of(const CircleGrid& log_outer, const CircleGrid& log_inner, double r0);
// Distance of an index to the nearest integer (the index is defined mod 1).
double index_distance_to_zero(double index);

// Kernel of the strip as printed, and its rewritten form in terms of ln r.
double sarason_K(double r, double t, double r0);
double sarason_K_rewritten(double r, double t, double r0);
// int_R [K(r, t) + K(r0 / r, t)] dt by adaptive-free truncated quadrature.
double sarason_K_mass(double r, double r0);

/// Absolutely continuous boundary densities on the two lines (2 pi periodic).
struct BoundaryDensity {
  CircleGrid outer;  // line r = 1
  CircleGrid inner;  // line r = r0
};

// The extension uses the normalized kernel K/2, whose line integral over both
// boundaries is 1. Values on the Chebyshev annulus mesh (spectral, per mode);
// boundary rows reproduce the densities exactly.
struct HarmonicExtension {
  PolarGrid U;
  double laplacian_residual;  // max |Lap U| over interior rows / max(1, max|U|)
};
HarmonicExtension harmonic_ext_annulus(const BoundaryDensity& mu, double r0, GridSpec grid = {65, 64});
// Direct convolution with the periodized kernel K/2 at one interior point.
double harmonic_ext_point(const BoundaryDensity& mu, double r0, double r, double t);

/// Outer function on A^ with prescribed boundary log-moduli.
struct OuterAnnulus {
  LiftedFunction F;
  double b0;  // coefficient of log z in log F; index = frac(b0)
  double boundary_defect;  // max | |F| - e^{mu} | at the boundary samples
  std::function<cd(double, double)> eval;  // F(r, t), t unwrapped
};
OuterAnnulus outer_annulus(const CircleGrid& log_outer, const CircleGrid& log_inner, double r0, int n_r = 17,
                           int periods = 2);

struct OmegaMeasures {
  double m_r0_on_inner = 0.0;
  double m_r0_on_outer = 0.0;
  double m_1_on_inner = 0.0;
  double m_1_on_outer = 0.0;
  double tol = 0.0;
  bool reliable = true;        // boundary extrapolants agreed
  double extrapolation_spread = 0.0;

  double m_r0() const noexcept { return m_r0_on_inner + m_r0_on_outer; }
  double m_1() const noexcept { return m_1_on_inner + m_1_on_outer; }
};
// Boundary values of phi from radii 1 - eps and r0 + eps, eps in {1e-2, 1e-3, 1e-4},
// extrapolated to eps = 0.
OmegaMeasures omega_measures(const AnalyticSelfMap& phi, double tol, int n_samples = 4096,
                             double richardson_tol = Tolerances{}.richardson);

enum class IsometryCase { Case1, Case2, Case3, NotIsometryCandidate };
std::string case_name(IsometryCase c);
IsometryCase classify_case(const OmegaMeasures& m, double tol, double case3_tol = Tolerances{}.omega_case3);

}  // namespace hardy
