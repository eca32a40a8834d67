#pragma once
// Classical Hardy spaces of the disk and of the annulus r0 < |z| < 1.

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "hardy/fourier.hpp"

namespace hardy {

/// sum_{n=lo}^{hi} a_n z^n. inner_radius 0 means a disk series (lo >= 0).
class LaurentSeries {
 public:
  LaurentSeries() = default;
  LaurentSeries(double inner_radius, int lo, std::vector<cd> coeffs);
  static LaurentSeries monomial(double inner_radius, int k, cd c = 1.0);
  // Taylor coefficients a_0..a_{n-1}.
  static LaurentSeries disk(std::vector<cd> coeffs) { return {0.0, 0, std::move(coeffs)}; }

  double inner_radius() const noexcept { return rho_; }
  bool is_disk() const noexcept { return rho_ == 0.0; }
  int lo() const noexcept { return lo_; }
  int hi() const noexcept { return lo_ + static_cast<int>(c_.size()) - 1; }
  bool empty() const noexcept { return c_.empty(); }
  cd operator[](int n) const noexcept;  // 0 outside [lo, hi]
  const std::vector<cd>& coeffs() const noexcept { return c_; }

  // Plain evaluation (any z != 0 for Laurent series).
  cd operator()(cd z) const;
  void evaluate(std::span<const cd> z, std::span<cd> out) const;
  // Heuristic decay check: the outermost coefficients (weighted by the circle
  // where they are largest) stay below tol * max.
  bool tail_ok(double tol) const;

  LaurentSeries operator+(const LaurentSeries& o) const;

 private:
  double rho_ = 0.0;
  int lo_ = 0;
  std::vector<cd> c_;
};

struct AnnulusTrace {
  CircleGrid outer;  // radius 1
  CircleGrid inner;  // radius r0
  double r0;

  AnnulusTrace(CircleGrid outer_, CircleGrid inner_);
  template <class F>
  static AnnulusTrace sample(double r0, int n, F&& f) {
    return AnnulusTrace(CircleGrid::sample(1.0, n, [&](double t) { return f(std::polar(1.0, t)); }),
                        CircleGrid::sample(r0, n, [&](double t) { return f(std::polar(r0, t)); }));
  }
};

/// An analytic function on D or A. The series is always present; functions
/// with discontinuous boundary data additionally carry an exact evaluator.
class HardyFunction {
 public:
  explicit HardyFunction(LaurentSeries s) : series_(std::move(s)) {}
  HardyFunction(LaurentSeries s, std::function<cd(cd)> exact)
      : series_(std::move(s)), exact_(std::move(exact)) {}

  const LaurentSeries& series() const noexcept { return series_; }
  double inner_radius() const noexcept { return series_.inner_radius(); }
  bool has_exact() const noexcept { return static_cast<bool>(exact_); }
  cd operator()(cd z) const { return exact_ ? exact_(z) : series_(z); }

  CircleGrid trace(int n_samples) const;             // on T
  AnnulusTrace annulus_trace(int n_samples) const;   // annulus only

 private:
  LaurentSeries series_;
  std::function<cd(cd)> exact_;
};

// Negative-index coefficients zeroed.
FourierCoeffs hardy_project_disk(const FourierCoeffs& c);

struct AnnulusSplit {
  LaurentSeries disk_part;   // n >= 0
  LaurentSeries outer_part;  // n < 0
};
AnnulusSplit annulus_split(const LaurentSeries& f);

struct Membership {
  bool member;
  double defect;
};
// defect = max_n |c_in(n) - r0^n c_T(n)| / max(1, r0^n), divided by
// max(1, max sample modulus) so that large negative powers stay at rounding level.
Membership annulus_membership(const AnnulusTrace& t, double tol);

// (1/N sum |g|^p)^{1/p}; the annulus adds both circles inside the p-th power.
double boundary_norm(const CircleGrid& t, double p);
double boundary_norm(const AnnulusTrace& t, double p);

struct InteriorValue {
  cd value;
  double tail_bound;  // |last retained term| on each side, summed
};
// Throws DomainError unless inner_radius < |z| < 1.
InteriorValue eval_interior(const LaurentSeries& f, cd z);

// Angle intervals [a, b] of T (counterclockwise, 0 < b - a < 2 pi).
struct Arc {
  double a;
  double b;
};
struct ArcSet {
  std::vector<Arc> arcs;
  double measure() const;  // normalized: full circle = 1
  bool contains(double t) const;
};

// Outer function with log|F| = log_modulus on T, F(0) > 0. Taylor series of
// length n_coeffs (defaults to the sample count), evaluated as exp(log-series).
HardyFunction outer_disk(const CircleGrid& log_modulus, int n_coeffs = 0);
// Piecewise-constant data: log|F| = base off the arcs and base + jump_j on arc j.
// The Herglotz integral of an arc indicator has a closed form, so F is exact.
HardyFunction outer_disk(double base, const std::vector<std::pair<Arc, double>>& jumps);

// Least N >= 0 with r0^N * M < 1/2.
int least_power(double r0, double M);

struct DefF {
  HardyFunction F;  // z^N g restricted to A
  int N;
  double M;         // max |g| on |z| = r0
};
// g outer on D with |g| = 1 on B0 and 1/2 elsewhere on T.
DefF annulus_defF(const ArcSet& B0, double r0, int n_samples = 4096);

// Norm of point evaluation on H^2(D): (1 - |z|^2)^{-1/2}.
double szego_eval_bound(cd z);

}  // namespace hardy
