#pragma once
// Polar area grids on the unit disk and on the annulus r0 < |z| < 1.
//
// Fields are stored as n_r x n_theta complex matrices (rows = radii in
// increasing order, columns = angles 2 pi k / n_theta). Angular derivatives
// are spectral; radial derivatives use Chebyshev collocation:
//   annulus: Chebyshev-Lobatto nodes mapped onto [r0, 1], both boundary
//            circles are grid rows;
//   disk:    the positive half of an odd-length Chebyshev grid on [-1, 1]
//            (r = 0 is never a node). Each angular mode m has parity (-1)^m
//            in r, which folds the full-grid operators onto the half grid.

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "hardy/fourier.hpp"
#include "hardy/tolerances.hpp"

namespace hardy {

enum class DomainKind { Disk, Annulus };

struct Domain {
  DomainKind kind = DomainKind::Disk;
  double inner_radius = 0.0;  // r0 for the annulus, 0 for the disk

  static Domain disk() { return {DomainKind::Disk, 0.0}; }
  static Domain annulus(double r0);

  bool is_disk() const noexcept { return kind == DomainKind::Disk; }
  bool contains(cd z) const noexcept;                       // open domain
  bool contains_closed(cd z, double slack = 0.0) const noexcept;
  bool operator==(const Domain&) const = default;
};

// Row-major so each radius (one FFT line) is contiguous.
using FieldMatrix = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class PolarMesh {
 public:
  static std::shared_ptr<const PolarMesh> make(Domain domain, GridSpec spec = {});

  const Domain& domain() const noexcept { return domain_; }
  int n_r() const noexcept { return static_cast<int>(radii_.size()); }
  int n_theta() const noexcept { return n_theta_; }
  const std::vector<double>& radii() const noexcept { return radii_; }
  double radius(int i) const { return radii_[static_cast<std::size_t>(i)]; }
  double theta(int k) const noexcept { return kTwoPi * k / n_theta_; }
  cd point(int i, int k) const { return std::polar(radius(i), theta(k)); }
  bool is_boundary_row(int i) const noexcept;
  int outer_row() const noexcept { return n_r() - 1; }

  // Radial first/second derivative acting on the profile of angular mode m.
  const Eigen::MatrixXd& d1(int m) const noexcept;
  const Eigen::MatrixXd& d2(int m) const noexcept;

  // Area quadrature weight of node (i, k): radial weight * r_i * 2 pi / n_theta.
  double area_weight(int i) const { return area_w_[static_cast<std::size_t>(i)]; }

  // Row vector interpolating a mode-m radial profile at radius r.
  Eigen::RowVectorXd interpolation_row(double r, int m) const;

  // Solves the mode-m radial Poisson problem with zero Dirichlet data.
  Eigen::VectorXcd solve_poisson_mode(int m, const Eigen::VectorXcd& rhs) const;

 private:
  PolarMesh(Domain domain, GridSpec spec);
  void build_poisson() const;

  Domain domain_;
  int n_theta_;
  std::vector<double> radii_;
  std::vector<double> area_w_;
  Eigen::MatrixXd d1_even_, d1_odd_, d2_even_, d2_odd_;  // annulus stores only *_even_
  // Barycentric data on the full (unfolded) Chebyshev grid.
  std::vector<double> bary_x_, bary_w_;
  std::vector<int> bary_fold_;  // half-grid row of each full-grid node
  std::vector<int> bary_sign_;  // +1 direct, -1 mirrored (r -> -r)

  mutable std::once_flag poisson_once_;
  mutable std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> poisson_lu_;  // by |m|
};

using MeshPtr = std::shared_ptr<const PolarMesh>;

/// A complex field sampled on a polar mesh.
struct PolarGrid {
  MeshPtr mesh;
  FieldMatrix values;  // n_r x n_theta

  explicit PolarGrid(MeshPtr m);
  PolarGrid(MeshPtr m, FieldMatrix v);

  template <class F>
  static PolarGrid from_function(MeshPtr m, F&& f) {
    PolarGrid g(m);
    for (int i = 0; i < m->n_r(); ++i)
      for (int k = 0; k < m->n_theta(); ++k) g.values(i, k) = f(m->point(i, k));
    return g;
  }

  int n_r() const noexcept { return static_cast<int>(values.rows()); }
  int n_theta() const noexcept { return static_cast<int>(values.cols()); }
  const Domain& domain() const noexcept { return mesh->domain(); }

  // Boundary circle as a CircleGrid (row outer_row() or row 0 on the annulus).
  CircleGrid outer_trace() const;
  CircleGrid inner_trace() const;  // annulus only

  // Field values on the circle of radius r at n_samples equispaced angles.
  CircleGrid trace_at_radius(double r, int n_samples) const;
  // Spectral interpolation at arbitrary points of the closed domain.
  cd evaluate(cd z) const;
  std::vector<cd> evaluate(std::span<const cd> points) const;

  double max_abs() const;
  double boundary_max_abs() const;  // over boundary rows
};

// Angular mode coefficients in FFT slot order (row i, slot k -> mode_of_slot(k)).
FieldMatrix to_modes(const PolarGrid& f);
PolarGrid from_modes(MeshPtr mesh, const FieldMatrix& modes);

// Wirtinger derivatives in polar form:
//   d    = (e^{-i theta}/2)(d_r - (i/r) d_theta),
//   dbar = (e^{ i theta}/2)(d_r + (i/r) d_theta).
struct WirtingerPair {
  PolarGrid d;
  PolarGrid dbar;
};
WirtingerPair wirtinger(const PolarGrid& f);
PolarGrid holo_derivative(const PolarGrid& f);  // d f
PolarGrid dbar(const PolarGrid& f);

PolarGrid laplacian(const PolarGrid& f);

// Area-weighted L2 norm over the domain.
double l2_norm(const PolarGrid& f);
double l2_norm(const FieldMatrix& values, const PolarMesh& mesh);

// u with Laplacian(u) = rhs in the interior and u = 0 on every boundary circle.
// The rhs must be real up to `imag_tol` * max|rhs|.
PolarGrid poisson_dirichlet0(const PolarGrid& rhs, double imag_tol = 1e-12);
// Same solve applied to real and imaginary parts independently.
PolarGrid poisson_dirichlet0_complex(const PolarGrid& rhs);
// Mode-space variant used inside iterations (input and output are mode matrices).
FieldMatrix poisson_dirichlet0_modes(const PolarMesh& mesh, const FieldMatrix& rhs_modes);

struct CauchyResult {
  PolarGrid s;
  double residual;  // ||dbar s - g|| / ||g|| (0 when g = 0)
};
// s with dbar s = g, normalized so the outer-circle mean of s is real.
// Realized as s = 4 d v with Laplacian(v) = g, v = 0 on the boundary.
// Throws std::runtime_error carrying the achieved residual when it exceeds tol;
// a negative tol only reports.
CauchyResult cauchy_area_transform(const PolarGrid& g, double tol = 1e-6);

// Mean of a field over the outer (or inner) boundary circle.
cd outer_mean(const PolarGrid& f);
cd inner_mean(const PolarGrid& f);

}  // namespace hardy
