#pragma once
// Composition operators C_phi f = f o phi between Hardy spaces of the disk and
// the annulus, and the diagnostics built on them.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hardy/beltrami.hpp"
#include "hardy/hardy_analytic.hpp"
#include "hardy/symbol.hpp"
#include "hardy/tolerances.hpp"

namespace hardy {

/// Verdict plus the numbers backing it.
struct DiagnosticsReport {
  std::string name;
  bool verdict = false;
  std::string status;  // short human-readable outcome
  std::vector<std::pair<std::string, double>> certificates;
  std::vector<std::pair<std::string, double>> tolerances;
  std::map<std::string, std::vector<double>> series;  // plot data
  std::vector<std::string> notes;

  void add(std::string key, double v) { certificates.emplace_back(std::move(key), v); }
  void tol(std::string key, double v) { tolerances.emplace_back(std::move(key), v); }
  // Throws std::out_of_range for an unknown key.
  double get(const std::string& key) const;
};

/// Samples on the boundary of the source domain (inner circle only on the annulus).
struct BoundaryTrace {
  CircleGrid outer;
  std::optional<CircleGrid> inner;
  double norm(double p) const;
};

BoundaryTrace compose_trace(const HardyFunction& f, const AnalyticSelfMap& phi, int n_samples = 1024);
// f given on a polar grid of phi's target domain, evaluated by spectral interpolation.
BoundaryTrace compose_trace(const GenHardyFunction& f, const AnalyticSelfMap& phi, int n_samples = 1024);

// ((1 + |phi(0)|)/(1 - |phi(0)|))^{1/p}; PreconditionError when |phi(0)| >= 1.
double norm_bound_disk(const AnalyticSelfMap& phi, double p);

struct OperatorMatrix {
  int size = 0;
  Eigen::MatrixXcd entries;
  double tail = 0.0;  // largest l2 norm of a column's coefficients beyond the truncation
  bool annulus = false;
  double r0 = 0.0;
  int lo = 0;  // first basis index (annulus: -(size/2))
};
// Disk: column n = Taylor coefficients 0..M-1 of phi^n. Annulus: basis
// z^n / sqrt(1 + r0^{2n}), |n| <= M/2 (size 2 floor(M/2) + 1), orthonormal on the two circles.
OperatorMatrix matrix_truncate(const AnalyticSelfMap& phi, int M);

struct NormEstimate {
  double estimate;        // max of all lower bounds below
  double sampled;         // max ||f o phi|| / ||f|| over the random inputs
  double power_iteration; // p = 2 disk only: largest singular value of the truncation
  int trials;
};
// Lower bound for ||C_phi|| on H^p of phi's domains (analytic context).
NormEstimate norm_estimate(const AnalyticSelfMap& phi, double p, int trials = 40, std::uint64_t seed = 1,
                           int M = 64, int n_samples = 8192);

// Seeded random inputs: polynomials (disk) or Laurent polynomials (annulus)
// with coefficients uniform in the unit disk, degree <= max_degree.
LaurentSeries random_polynomial(std::uint64_t seed, int index, int max_degree = 32);
LaurentSeries random_laurent(std::uint64_t seed, int index, double r0, int max_degree = 16);

// nu_context: phi acts on H^p_nu; only necessary conditions are then certified.
DiagnosticsReport isometry_check_disk(const AnalyticSelfMap& phi, double p, int trials = 20, std::uint64_t seed = 1,
                                      int n_samples = 1024, bool nu_context = false, const Tolerances& tol = {});
DiagnosticsReport isometry_check_annulus(const AnalyticSelfMap& phi, double p, int trials = 20, std::uint64_t seed = 1,
                                         int n_samples = 1024, const Tolerances& tol = {});

// Winding number of phi - a along the positively oriented boundary of the
// source domain; nullopt when a lies within `skip` of the boundary image.
std::optional<int> winding_count(const AnalyticSelfMap& phi, cd a, int n_samples = 4096, double skip = 1e-3);
// Counts over the lattice {0.125, ..., 0.875} x 16 angles inside the target domain.
DiagnosticsReport invertibility_check(const AnalyticSelfMap& phi, const Tolerances& tol = {});

struct CompactProxy {
  DiagnosticsReport report;
  std::vector<double> sigma;              // analytic, from matrix_truncate
  std::vector<double> sigma_l2;           // analytic, full boundary L2 output
  std::vector<double> sigma_generalized;  // alpha context (empty when alpha = 0)
  double s_sup = 0.0;
};
// Disk symbols. alpha != 0: the operator on G^2_alpha in the basis e^s z^n,
// s from hard_factorize(1, alpha), Re s = 0 on T.
CompactProxy compact_proxy(const AnalyticSelfMap& phi, int M, cd alpha = 0.0, GridSpec grid = {65, 128},
                           const Tolerances& tol = {});

// sup |Re f(z)| over f in H^p(D) with ||tr f||_p <= 1, polynomials of degree < M.
// p = 2: reproducing kernel sum; other p: iteratively reweighted least squares.
double eval_functional_norm(cd z, double p, int M = 256);

// (f o phi)(z) computed from the composed boundary trace versus f(phi(z)).
DiagnosticsReport adjoint_identity_check(const AnalyticSelfMap& phi, cd z, const HardyFunction& f,
                                         int n_samples = 1024);
// Same for an f-type function on a grid of phi's target (nu context): the
// composed grid interpolated at z versus f interpolated at phi(z).
DiagnosticsReport adjoint_identity_check(const AnalyticSelfMap& phi, cd z, const GenHardyFunction& f);

}  // namespace hardy
