#include "hardy/polar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hardy/error.hpp"
#include "hardy/kernels.hpp"

namespace hardy {

Domain Domain::annulus(double r0) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw std::invalid_argument("annulus inner radius must lie in (0,1)");
  return {DomainKind::Annulus, r0};
}

bool Domain::contains(cd z) const noexcept {
  const double r = std::abs(z);
  return r < 1.0 && (is_disk() || r > inner_radius);
}

bool Domain::contains_closed(cd z, double slack) const noexcept {
  const double r = std::abs(z);
  return r <= 1.0 + slack && r >= inner_radius - slack;
}

namespace {

// Chebyshev-Lobatto nodes x_j = cos(pi j / n) and the collocation derivative.
void chebyshev(int n, std::vector<double>& x, Eigen::MatrixXd& d) {
  x.resize(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) x[static_cast<std::size_t>(j)] = std::cos(kPi * j / n);
  // Symmetrize the node values to kill rounding asymmetry around zero.
  for (int j = 0; j <= n / 2; ++j) {
    const double v = 0.5 * (x[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(n - j)]);
    x[static_cast<std::size_t>(j)] = v;
    x[static_cast<std::size_t>(n - j)] = -v;
  }
  if (n % 2 == 0) x[static_cast<std::size_t>(n / 2)] = 0.0;
  d.setZero(n + 1, n + 1);
  auto c = [n](int j) { return ((j == 0 || j == n) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0); };
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      d(i, j) = (c(i) / c(j)) / (x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
    }
  }
  for (int i = 0; i <= n; ++i) d(i, i) = -d.row(i).sum();
}

// Clenshaw-Curtis weights on the nodes cos(pi j / n).
std::vector<double> clenshaw_curtis(int n) {
  std::vector<double> w(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(n - 1), 1.0);
  auto theta = [n](int j) { return kPi * j / n; };
  if (n % 2 == 0) {
    w.front() = w.back() = 1.0 / (n * n - 1.0);
    for (int k = 1; k < n / 2; ++k)
      for (int j = 1; j < n; ++j)
        v[static_cast<std::size_t>(j - 1)] -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
    for (int j = 1; j < n; ++j) v[static_cast<std::size_t>(j - 1)] -= std::cos(n * theta(j)) / (n * n - 1.0);
  } else {
    w.front() = w.back() = 1.0 / (static_cast<double>(n) * n);
    for (int k = 1; k <= (n - 1) / 2; ++k)
      for (int j = 1; j < n; ++j)
        v[static_cast<std::size_t>(j - 1)] -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
  }
  for (int j = 1; j < n; ++j) w[static_cast<std::size_t>(j)] = 2.0 * v[static_cast<std::size_t>(j - 1)] / n;
  return w;
}

bool even_mode(int m) noexcept { return (m % 2) == 0; }

}  // namespace

PolarMesh::PolarMesh(Domain domain, GridSpec spec) : domain_(domain), n_theta_(spec.n_theta) {
  if (spec.n_theta < 8 || !is_power_of_two(spec.n_theta))
    throw std::invalid_argument("PolarMesh: n_theta must be a power of two >= 8");
  if (spec.n_r < 4) throw std::invalid_argument("PolarMesh: n_r must be at least 4");
  const int nr = spec.n_r;
  radii_.resize(static_cast<std::size_t>(nr));
  area_w_.resize(static_cast<std::size_t>(nr));
  const double dtheta = kTwoPi / n_theta_;

  if (domain_.is_disk()) {
    const int n_full = 2 * nr - 1;  // odd, so r = 0 is not a node
    std::vector<double> x;
    Eigen::MatrixXd d;
    chebyshev(n_full, x, d);
    const Eigen::MatrixXd dd = d * d;
    const auto w = clenshaw_curtis(n_full);
    // Chebyshev index a in [0, nr) holds x_a > 0; its mirror is n_full - a.
    // Ascending storage index i = nr - 1 - a.
    d1_even_.resize(nr, nr);
    d1_odd_.resize(nr, nr);
    d2_even_.resize(nr, nr);
    d2_odd_.resize(nr, nr);
    for (int a = 0; a < nr; ++a) {
      const int i = nr - 1 - a;
      radii_[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(a)];
      // Full-grid integral of |x| f over [-1,1] is twice the disk radial integral.
      area_w_[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)] * dtheta;
      for (int b = 0; b < nr; ++b) {
        const int j = nr - 1 - b;
        const int mb = n_full - b;
        d1_even_(i, j) = d(a, b) + d(a, mb);
        d1_odd_(i, j) = d(a, b) - d(a, mb);
        d2_even_(i, j) = dd(a, b) + dd(a, mb);
        d2_odd_(i, j) = dd(a, b) - dd(a, mb);
      }
    }
    bary_x_ = x;
    bary_w_.resize(x.size());
    bary_fold_.resize(x.size());
    bary_sign_.resize(x.size());
    for (int j = 0; j <= n_full; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      bary_w_[ju] = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == n_full) ? 0.5 : 1.0);
      const bool direct = j < nr;
      bary_fold_[ju] = nr - 1 - (direct ? j : n_full - j);
      bary_sign_[ju] = direct ? 1 : -1;
    }
  } else {
    const double r0 = domain_.inner_radius;
    const int n = nr - 1;
    std::vector<double> x;
    Eigen::MatrixXd d;
    chebyshev(n, x, d);
    const auto w = clenshaw_curtis(n);
    const double scale = 2.0 / (1.0 - r0);
    d1_even_.resize(nr, nr);
    for (int a = 0; a < nr; ++a) {
      const int i = nr - 1 - a;
      const double r = r0 + 0.5 * (1.0 - r0) * (x[static_cast<std::size_t>(a)] + 1.0);
      radii_[static_cast<std::size_t>(i)] = r;
      area_w_[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(a)] * 0.5 * (1.0 - r0) * r * dtheta;
      for (int b = 0; b < nr; ++b) d1_even_(i, nr - 1 - b) = scale * d(a, b);
    }
    radii_.front() = r0;
    radii_.back() = 1.0;
    d2_even_ = d1_even_ * d1_even_;
    bary_x_ = x;
    bary_w_.resize(x.size());
    bary_fold_.resize(x.size());
    bary_sign_.assign(x.size(), 1);
    for (int j = 0; j <= n; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      bary_w_[ju] = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == n) ? 0.5 : 1.0);
      bary_fold_[ju] = nr - 1 - j;
    }
  }
}

std::shared_ptr<const PolarMesh> PolarMesh::make(Domain domain, GridSpec spec) {
  return std::shared_ptr<const PolarMesh>(new PolarMesh(domain, spec));
}

bool PolarMesh::is_boundary_row(int i) const noexcept {
  if (i == n_r() - 1) return true;
  return !domain_.is_disk() && i == 0;
}

const Eigen::MatrixXd& PolarMesh::d1(int m) const noexcept {
  return (domain_.is_disk() && !even_mode(m)) ? d1_odd_ : d1_even_;
}

const Eigen::MatrixXd& PolarMesh::d2(int m) const noexcept {
  return (domain_.is_disk() && !even_mode(m)) ? d2_odd_ : d2_even_;
}

Eigen::RowVectorXd PolarMesh::interpolation_row(double r, int m) const {
  const int nr = n_r();
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nr);
  const double parity = (domain_.is_disk() && !even_mode(m)) ? -1.0 : 1.0;
  const double x = domain_.is_disk() ? r : 2.0 * (r - domain_.inner_radius) / (1.0 - domain_.inner_radius) - 1.0;
  const std::size_t nf = bary_x_.size();
  for (std::size_t j = 0; j < nf; ++j) {
    if (x == bary_x_[j]) {
      row(bary_fold_[j]) = bary_sign_[j] > 0 ? 1.0 : parity;
      return row;
    }
  }
  double denom = 0.0;
  for (std::size_t j = 0; j < nf; ++j) {
    const double c = bary_w_[j] / (x - bary_x_[j]);
    denom += c;
    row(bary_fold_[j]) += c * (bary_sign_[j] > 0 ? 1.0 : parity);
  }
  return row / denom;
}

void PolarMesh::build_poisson() const {
  const int nr = n_r();
  const int mmax = n_theta_ / 2;
  poisson_lu_.resize(static_cast<std::size_t>(mmax + 1));
  Eigen::VectorXd inv_r(nr);
  for (int i = 0; i < nr; ++i) inv_r(i) = 1.0 / radius(i);
  for (int m = 0; m <= mmax; ++m) {
    Eigen::MatrixXd l = d2(m) + inv_r.asDiagonal() * d1(m);
    l.diagonal() -= (static_cast<double>(m) * m) * inv_r.cwiseAbs2();
    for (int i = 0; i < nr; ++i) {
      if (!is_boundary_row(i)) continue;
      l.row(i).setZero();
      l(i, i) = 1.0;
    }
    poisson_lu_[static_cast<std::size_t>(m)].compute(l);
    const double rc = poisson_lu_[static_cast<std::size_t>(m)].rcond();
    if (!(rc > 1e-300)) {
      std::ostringstream msg;
      msg << "radial Poisson operator for mode " << m << " is singular (rcond " << rc << ")";
      throw SingularSystem(msg.str());
    }
  }
}

Eigen::VectorXcd PolarMesh::solve_poisson_mode(int m, const Eigen::VectorXcd& rhs) const {
  std::call_once(poisson_once_, [this] { build_poisson(); });
  Eigen::VectorXcd b = rhs;
  for (int i = 0; i < n_r(); ++i)
    if (is_boundary_row(i)) b(i) = 0.0;
  const auto& lu = poisson_lu_[static_cast<std::size_t>(std::abs(m))];
  const Eigen::VectorXd re = lu.solve(b.real());
  const Eigen::VectorXd im = lu.solve(b.imag());
  Eigen::VectorXcd u(n_r());
  u.real() = re;
  u.imag() = im;
  return u;
}

PolarGrid::PolarGrid(MeshPtr m) : mesh(std::move(m)), values(FieldMatrix::Zero(mesh->n_r(), mesh->n_theta())) {}

PolarGrid::PolarGrid(MeshPtr m, FieldMatrix v) : mesh(std::move(m)), values(std::move(v)) {
  if (values.rows() != mesh->n_r() || values.cols() != mesh->n_theta())
    throw std::invalid_argument("PolarGrid: value matrix does not match mesh");
}

CircleGrid PolarGrid::outer_trace() const {
  const int i = mesh->outer_row();
  std::vector<cd> s(values.row(i).data(), values.row(i).data() + n_theta());
  return CircleGrid(1.0, std::move(s));
}

CircleGrid PolarGrid::inner_trace() const {
  if (domain().is_disk()) throw std::logic_error("inner_trace on a disk grid");
  std::vector<cd> s(values.row(0).data(), values.row(0).data() + n_theta());
  return CircleGrid(domain().inner_radius, std::move(s));
}

FieldMatrix to_modes(const PolarGrid& f) {
  const int nr = f.n_r(), nt = f.n_theta();
  FieldMatrix out(nr, nt);
  const double inv = 1.0 / nt;
  for (int i = 0; i < nr; ++i) {
    std::span<const cd> in(f.values.row(i).data(), static_cast<std::size_t>(nt));
    std::span<cd> dst(out.row(i).data(), static_cast<std::size_t>(nt));
    fft_forward(in, dst);
  }
  out *= inv;
  return out;
}

PolarGrid from_modes(MeshPtr mesh, const FieldMatrix& modes) {
  PolarGrid g(mesh);
  const int nt = g.n_theta();
  for (int i = 0; i < g.n_r(); ++i) {
    std::span<const cd> in(modes.row(i).data(), static_cast<std::size_t>(nt));
    std::span<cd> dst(g.values.row(i).data(), static_cast<std::size_t>(nt));
    fft_backward(in, dst);
  }
  return g;
}

namespace {

// Radial profile (interpolated mode coefficients) of every mode at radius r.
Eigen::RowVectorXcd modes_at_radius(const PolarMesh& mesh, const FieldMatrix& modes, double r) {
  const int nt = mesh.n_theta();
  Eigen::RowVectorXcd out(nt);
  const Eigen::RowVectorXd even = mesh.interpolation_row(r, 0);
  if (mesh.domain().is_disk()) {
    const Eigen::RowVectorXcd pe = even.cast<cd>() * modes;
    const Eigen::RowVectorXcd po = mesh.interpolation_row(r, 1).cast<cd>() * modes;
    for (int k = 0; k < nt; ++k) out(k) = even_mode(mode_of_slot(k, nt)) ? pe(k) : po(k);
  } else {
    out = even.cast<cd>() * modes;
  }
  return out;
}

}  // namespace

CircleGrid PolarGrid::trace_at_radius(double r, int n_samples) const {
  const FieldMatrix modes = to_modes(*this);
  const Eigen::RowVectorXcd prof = modes_at_radius(*mesh, modes, r);
  const int nt = n_theta();
  std::vector<cd> spec(static_cast<std::size_t>(n_samples));
  for (int k = 0; k < nt; ++k) {
    const int m = mode_of_slot(k, nt);
    if (m >= n_samples / 2 || m < -n_samples / 2) continue;
    spec[static_cast<std::size_t>(slot_of_mode(m, n_samples))] += prof(k);
  }
  std::vector<cd> out(static_cast<std::size_t>(n_samples));
  fft_backward(spec, out);
  return CircleGrid(r, std::move(out));
}

std::vector<cd> PolarGrid::evaluate(std::span<const cd> points) const {
  const FieldMatrix modes = to_modes(*this);
  const int nt = n_theta();
  std::vector<cd> out(points.size());
  std::vector<cd> phase(static_cast<std::size_t>(nt));
  std::vector<cd> prof(static_cast<std::size_t>(nt));
  for (std::size_t j = 0; j < points.size(); ++j) {
    const cd z = points[j];
    const double r = std::abs(z);
    if (!domain().contains_closed(z, 1e-12))
      throw DomainError("PolarGrid::evaluate: point outside the closed domain");
    const double rr = std::clamp(r, domain().inner_radius, 1.0);
    const double th = std::arg(z);
    const Eigen::RowVectorXcd p = modes_at_radius(*mesh, modes, rr);
    for (int k = 0; k < nt; ++k) {
      const int m = mode_of_slot(k, nt);
      phase[static_cast<std::size_t>(k)] = std::polar(1.0, m * th);
      prof[static_cast<std::size_t>(k)] = p(k);
    }
    // Nyquist mode: use the real cosine so real fields stay real.
    const std::size_t nyq = static_cast<std::size_t>(nt / 2);
    phase[nyq] = std::cos(0.5 * nt * th);
    out[j] = kernels::dot(prof, phase);
  }
  return out;
}

cd PolarGrid::evaluate(cd z) const {
  const cd pts[1] = {z};
  return evaluate(std::span<const cd>(pts, 1)).front();
}

double PolarGrid::max_abs() const { return values.cwiseAbs().maxCoeff(); }

double PolarGrid::boundary_max_abs() const {
  double m = values.row(mesh->outer_row()).cwiseAbs().maxCoeff();
  if (!domain().is_disk()) m = std::max(m, values.row(0).cwiseAbs().maxCoeff());
  return m;
}

WirtingerPair wirtinger(const PolarGrid& f) {
  const auto& mesh = *f.mesh;
  const int nr = f.n_r(), nt = f.n_theta();
  const FieldMatrix modes = to_modes(f);
  FieldMatrix dm = FieldMatrix::Zero(nr, nt);
  FieldMatrix dbm = FieldMatrix::Zero(nr, nt);
  Eigen::VectorXd inv_r(nr);
  for (int i = 0; i < nr; ++i) inv_r(i) = 1.0 / mesh.radius(i);
  for (int k = 0; k < nt; ++k) {
    const int m = mode_of_slot(k, nt);
    const Eigen::VectorXcd col = modes.col(k);
    const Eigen::VectorXcd dr = mesh.d1(m) * col;
    const Eigen::VectorXcd mr = (static_cast<double>(m) * inv_r).cast<cd>().cwiseProduct(col);
    if (m - 1 >= -nt / 2) dm.col(slot_of_mode(m - 1, nt)) = 0.5 * (dr + mr);
    if (m + 1 <= nt / 2 - 1) dbm.col(slot_of_mode(m + 1, nt)) = 0.5 * (dr - mr);
  }
  return {from_modes(f.mesh, dm), from_modes(f.mesh, dbm)};
}

PolarGrid holo_derivative(const PolarGrid& f) { return wirtinger(f).d; }
PolarGrid dbar(const PolarGrid& f) { return wirtinger(f).dbar; }

PolarGrid laplacian(const PolarGrid& f) {
  const auto& mesh = *f.mesh;
  const int nr = f.n_r(), nt = f.n_theta();
  const FieldMatrix modes = to_modes(f);
  FieldMatrix out(nr, nt);
  Eigen::VectorXd inv_r(nr);
  for (int i = 0; i < nr; ++i) inv_r(i) = 1.0 / mesh.radius(i);
  for (int k = 0; k < nt; ++k) {
    const int m = mode_of_slot(k, nt);
    const Eigen::VectorXcd col = modes.col(k);
    Eigen::VectorXcd v = mesh.d2(m) * col + inv_r.cast<cd>().cwiseProduct(mesh.d1(m) * col);
    v -= (static_cast<double>(m) * m) * inv_r.cwiseAbs2().cast<cd>().cwiseProduct(col);
    out.col(k) = v;
  }
  return from_modes(f.mesh, out);
}

double l2_norm(const FieldMatrix& values, const PolarMesh& mesh) {
  double s = 0.0;
  for (int i = 0; i < values.rows(); ++i) s += mesh.area_weight(i) * values.row(i).squaredNorm();
  return std::sqrt(s);
}

double l2_norm(const PolarGrid& f) { return l2_norm(f.values, *f.mesh); }

FieldMatrix poisson_dirichlet0_modes(const PolarMesh& mesh, const FieldMatrix& rhs_modes) {
  const int nr = mesh.n_r(), nt = mesh.n_theta();
  FieldMatrix out(nr, nt);
  for (int k = 0; k < nt; ++k) {
    const int m = mode_of_slot(k, nt);
    out.col(k) = mesh.solve_poisson_mode(m, rhs_modes.col(k));
  }
  return out;
}

PolarGrid poisson_dirichlet0_complex(const PolarGrid& rhs) {
  const FieldMatrix u = poisson_dirichlet0_modes(*rhs.mesh, to_modes(rhs));
  PolarGrid out = from_modes(rhs.mesh, u);
  // Boundary rows are exactly zero in mode space; keep them exactly zero here.
  for (int i = 0; i < out.n_r(); ++i)
    if (rhs.mesh->is_boundary_row(i)) out.values.row(i).setZero();
  return out;
}

PolarGrid poisson_dirichlet0(const PolarGrid& rhs, double imag_tol) {
  const double scale = rhs.max_abs();
  const double imag_max = rhs.values.imag().cwiseAbs().maxCoeff();
  if (imag_max > imag_tol * std::max(scale, 1.0))
    throw std::invalid_argument("poisson_dirichlet0: right-hand side must be real-valued");
  PolarGrid out = poisson_dirichlet0_complex(rhs);
  out.values = out.values.real().cast<cd>();
  return out;
}

cd outer_mean(const PolarGrid& f) { return f.values.row(f.mesh->outer_row()).mean(); }

cd inner_mean(const PolarGrid& f) {
  if (f.domain().is_disk()) throw std::logic_error("inner_mean on a disk grid");
  return f.values.row(0).mean();
}

CauchyResult cauchy_area_transform(const PolarGrid& g, double tol) {
  const PolarGrid v = poisson_dirichlet0_complex(g);
  PolarGrid s = holo_derivative(v);
  s.values *= 4.0;
  s.values.array() -= cd{0.0, outer_mean(s).imag()};
  const double gn = l2_norm(g);
  double residual = 0.0;
  if (gn > 0.0) {
    PolarGrid r = dbar(s);
    r.values -= g.values;
    residual = l2_norm(r) / gn;
  }
  if (tol >= 0.0 && residual > tol) {
    std::ostringstream msg;
    msg << "cauchy_area_transform: residual " << residual << " exceeds tolerance " << tol;
    throw std::runtime_error(msg.str());
  }
  return {std::move(s), residual};
}

}  // namespace hardy
