#pragma once
// Discrete fields on the MAC grid and the first-order differential stencils:
// divergence, gradient, component Laplacian (Dirichlet by ghost reflection),
// symmetric gradient A(v) = grad v + (grad v)^T, and its exact discrete
// adjoint. All fields are plain value types.

#include <vector>

#include "tgf/grid.hpp"

namespace tgf {

struct ScalarField {
  Grid grid;
  std::vector<double> c;  // cell centers, nx*ny

  ScalarField() = default;
  explicit ScalarField(const Grid& g) : grid(g), c(static_cast<std::size_t>(g.ncells()), 0.0) {}
  double& operator()(int i, int j) { return c[grid.ic(i, j)]; }
  double operator()(int i, int j) const { return c[grid.ic(i, j)]; }
};

struct VelocityField {
  Grid grid;
  std::vector<double> u;  // x-faces, (nx+1)*ny; boundary faces exactly 0
  std::vector<double> v;  // y-faces, nx*(ny+1); boundary faces exactly 0

  VelocityField() = default;
  explicit VelocityField(const Grid& g)
      : grid(g),
        u(static_cast<std::size_t>(g.nu()), 0.0),
        v(static_cast<std::size_t>(g.nv()), 0.0) {}

  double& U(int i, int j) { return u[grid.iu(i, j)]; }
  double U(int i, int j) const { return u[grid.iu(i, j)]; }
  double& V(int i, int j) { return v[grid.iv(i, j)]; }
  double V(int i, int j) const { return v[grid.iv(i, j)]; }

  void zero_boundary();  // force the Dirichlet invariant
  bool boundary_is_zero(double tol = 0.0) const;

  VelocityField& operator+=(const VelocityField& o);
  VelocityField& operator-=(const VelocityField& o);
  VelocityField& operator*=(double a);
};

VelocityField operator+(VelocityField a, const VelocityField& b);
VelocityField operator-(VelocityField a, const VelocityField& b);
VelocityField operator*(double a, VelocityField f);

// Symmetric 2x2 tensor at cell centers; only the upper triangle is stored.
struct TensorField {
  Grid grid;
  std::vector<double> a11, a12, a22;  // nx*ny each

  TensorField() = default;
  explicit TensorField(const Grid& g)
      : grid(g),
        a11(static_cast<std::size_t>(g.ncells()), 0.0),
        a12(static_cast<std::size_t>(g.ncells()), 0.0),
        a22(static_cast<std::size_t>(g.ncells()), 0.0) {}
};

// --- inner products / norms -------------------------------------------------

// L2 inner product of the face degrees of freedom (the discrete H structure).
double inner(const VelocityField& a, const VelocityField& b);
double norm2(const VelocityField& a);  // sqrt(inner(a,a))

// Tensor L2 pairing sum A:B * h^2 with A:B = a11 b11 + 2 a12 b12 + a22 b22.
double inner(const TensorField& a, const TensorField& b);
// integral |A|^4 (midpoint rule)
double quartic_norm4(const TensorField& a);
// integral tr(A^3)
double trace3_integral(const TensorField& a);
// L2^2 and L4^4 of the tensor
double norm2_sq(const TensorField& a);

struct FieldNorms {
  double L2, L4, W14, gradL2, gradL4;
};
// Midpoint-rule quadrature norms of the velocity and its gradient, both
// sampled at cell centers. W14 = (L4^4 + gradL4^4)^(1/4).
FieldNorms norms(const VelocityField& f);
double sup_norm_centers(const VelocityField& f);  // max |v| at cell centers

// --- stencils ----------------------------------------------------------------

// Discrete divergence at cell centers.
ScalarField divergence(const VelocityField& f);
double max_divergence(const VelocityField& f);

// Face gradient of a cell-centered scalar; zero normal component on the
// boundary (homogeneous Neumann).
VelocityField gradient(const ScalarField& p);

// Component Laplacian with no-slip ghost reflection; boundary faces of the
// result stay zero.
VelocityField laplacian(const VelocityField& f);

// A(v) = grad v + (grad v)^T at cell centers. Diagonal entries come from the
// natural center differences; the off-diagonal entry is evaluated at corner
// nodes (ghost reflection at walls) and averaged to centers.
TensorField sym_gradient(const VelocityField& f);

// Exact adjoint of sym_gradient: (sym_gradient(w), S)_tensor = (w, sym_gradient_adjoint(S))
// in the face inner product, to rounding. The returned field is raw (not
// projected, boundary faces zero).
VelocityField sym_gradient_adjoint(const TensorField& s);

// Divergence-form stencil for a cell-centered symmetric tensor: -div(S) on
// faces. Used as an independent cross-check of the weak-form route.
VelocityField div_tensor(const TensorField& s);

// Full velocity gradient interpolated to cell centers (dudx, dudy, dvdx, dvdy).
struct CenterGradient {
  std::vector<double> dudx, dudy, dvdx, dvdy;
};
CenterGradient center_gradient(const VelocityField& f);

// Velocity interpolated to cell centers.
void center_velocity(const VelocityField& f, std::vector<double>& uc, std::vector<double>& vc);

// Discrete curl (z-component) of a face field at interior corner nodes:
// dv/dx - du/dy. Returns max |curl|.
double max_interior_curl(const VelocityField& f);

// Weighted L2 mass: sum w_cell * |v_center|^2 * h^2 for a cell-centered weight.
double weighted_mass(const VelocityField& f, const std::vector<double>& w);

}  // namespace tgf
