#pragma once
// Discrete Helmholtz/Leray projection and the Stokes eigenbasis.
//
// The projection solves one cell-centered Poisson problem with homogeneous
// Neumann data. The primary solver diagonalizes the separable 5-point
// operator with the numerically computed 1D eigenbases (a direct solve,
// exact to rounding); a plain conjugate-gradient solver is kept as an
// independent cross-check.
//
// The Stokes eigenproblem is solved exactly on the discretely divergence-free
// subspace by parameterizing it with a corner-node stream function (zero on
// the boundary): the generalized symmetric problem K psi = mu M psi with
// K = C^T (-Lap) C and M = C^T C, C the discrete curl. Eigenfields are then
// orthonormal, divergence-free, and satisfy the projected eigenvalue relation
// to rounding.

#include <string>
#include <vector>

#include "tgf/field.hpp"

namespace tgf {

class PoissonSolver {
 public:
  explicit PoissonSolver(const Grid& g);

  // Solve (-Lap_N) phi = rhs for the mean-zero phi (direct, tensor-product).
  ScalarField solve(const ScalarField& rhs) const;

  // Conjugate-gradient solve of the same problem at relative tolerance `tol`.
  // Throws std::runtime_error with the residual if the iteration cap is hit.
  ScalarField solve_cg(const ScalarField& rhs, double tol = 1e-12,
                       int max_iter = 20000) const;

  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  std::vector<double> vx_, vxt_, vy_, vyt_;  // 1D eigenvector matrices
  std::vector<double> lamx_, lamy_;          // ascending, first ~0 (Neumann)
};

class LerayProjector {
 public:
  explicit LerayProjector(const Grid& g) : poisson_(g) {}

  // w - grad(phi) with div(result) ~ rounding; idempotent.
  VelocityField project(const VelocityField& w) const;
  // The potential of the removed gradient part (mean zero).
  ScalarField potential(const VelocityField& w) const;
  // grad(potential) = (I - P) w
  VelocityField gradient_part(const VelocityField& w) const;

  // Stokes operator A v = P(-Lap v) with no-slip ghosts.
  VelocityField stokes_apply(const VelocityField& v) const;

  const PoissonSolver& poisson() const { return poisson_; }
  const Grid& grid() const { return poisson_.grid(); }

 private:
  PoissonSolver poisson_;
};

struct StokesEigenbasis {
  Grid grid;
  int m = 0;
  std::vector<double> eigenvalues;      // ascending, all > 0
  std::vector<VelocityField> fields;    // orthonormal in the face inner product

  double smallest() const { return eigenvalues.empty() ? 0.0 : eigenvalues.front(); }
};

// The m smallest eigenpairs of the projected Laplacian. Requires
// m <= 0.2 * (nx-1) * (ny-1) to keep the discrete eigenproblem well resolved.
StokesEigenbasis stokes_eigs(const Grid& g, int m);

// Just the smallest eigenvalue, matrix-free (inverse iteration with an inner
// conjugate-gradient solve); cheap enough for refinement studies on grids
// where the dense solve is not.
double smallest_stokes_eigenvalue(const Grid& g, double tol = 1e-9);

// Coefficients (v, e_i); reconstruction of sum c_i e_i.
std::vector<double> galerkin_project(const VelocityField& v, const StokesEigenbasis& basis);
VelocityField reconstruct(const std::vector<double>& coeffs, const StokesEigenbasis& basis);

// Cache file: JSON header (grid, m, eigenvalues) + binary field blocks.
void save_eigenbasis(const StokesEigenbasis& b, const std::string& path);
StokesEigenbasis load_eigenbasis(const std::string& path);
// Compute-or-load keyed by the grid hash inside `cache_dir` (empty disables caching).
StokesEigenbasis cached_stokes_eigs(const Grid& g, int m, const std::string& cache_dir);

}  // namespace tgf
