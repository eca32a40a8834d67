#pragma once

namespace hardy {

// Every numeric threshold that influences a verdict lives here so a run
// report can echo the full set.
struct Tolerances {
  // grid_transform
  double roundtrip = 1e-12;          // analyze/synthesize inverse pair
  double aliasing_rel = 1e-14;       // coefficient counted as nonzero above this * max
  double poisson_boundary = 1e-12;   // Dirichlet rows of poisson_dirichlet0
  double cauchy_residual = 1e-6;     // ||dbar s - g|| / ||g||

  // hardy_analytic
  double membership = 1e-10;
  double series_tail = 1e-10;        // Laurent coefficient tail vs max

  // annulus_surface
  double omega_level = 1e-4;         // |phi*| within this of r0 or 1
  double omega_case3 = 1e-4;         // distance from 1/2 for Case 3
  double richardson = 1e-6;          // boundary extrapolants must agree to this
  double kernel_tail = 1e-12;        // periodized kernel truncation

  // beltrami
  double pde_residual = 1e-6;
  double identity = 1e-8;            // w = e^s F pointwise
  double boundary_real = 1e-8;       // |Re s| on boundary rows
  double picard_step = 1e-10;        // sup-norm update that stops Picard iterations
  int hard_max_iterations = 200;
  int dirichlet_max_iterations = 100;
  double zero_free_floor = 1e-8;     // min |w| or |F| on the grid

  // compop
  double isometry = 1e-8;            // empirical norm preservation
  double witness = 1e-3;             // deviation that counts as a non-isometry witness
  double inner_symbol = 1e-8;        // |phi(0)| and 1 - min|phi*| for disk isometries
  double family_fit = 1e-8;          // distance to rotation / twisted inversion families
  double winding_skip = 1e-3;        // targets this close to phi(boundary) are skipped
  int winding_samples = 4096;
};

// Polar-grid resolution shared by the beltrami module.
struct GridSpec {
  int n_r = 129;
  int n_theta = 256;
};

}  // namespace hardy
