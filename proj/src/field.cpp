#include "tgf/field.hpp"

#include <cmath>
#include <stdexcept>

#include "tgf/kernels.hpp"

namespace tgf {

namespace {
void check_same(const Grid& a, const Grid& b, const char* what) {
  if (!a.same_layout(b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}
}  // namespace

void VelocityField::zero_boundary() {
  const Grid& g = grid;
  for (int j = 0; j < g.ny; ++j) {
    u[g.iu(0, j)] = 0.0;
    u[g.iu(g.nx, j)] = 0.0;
  }
  for (int i = 0; i < g.nx; ++i) {
    v[g.iv(i, 0)] = 0.0;
    v[g.iv(i, g.ny)] = 0.0;
  }
}

bool VelocityField::boundary_is_zero(double tol) const {
  const Grid& g = grid;
  for (int j = 0; j < g.ny; ++j)
    if (std::abs(u[g.iu(0, j)]) > tol || std::abs(u[g.iu(g.nx, j)]) > tol) return false;
  for (int i = 0; i < g.nx; ++i)
    if (std::abs(v[g.iv(i, 0)]) > tol || std::abs(v[g.iv(i, g.ny)]) > tol) return false;
  return true;
}

VelocityField& VelocityField::operator+=(const VelocityField& o) {
  check_same(grid, o.grid, "+=");
  kernels::axpy(1.0, o.u.data(), u.data(), u.size());
  kernels::axpy(1.0, o.v.data(), v.data(), v.size());
  return *this;
}

VelocityField& VelocityField::operator-=(const VelocityField& o) {
  check_same(grid, o.grid, "-=");
  kernels::axpy(-1.0, o.u.data(), u.data(), u.size());
  kernels::axpy(-1.0, o.v.data(), v.data(), v.size());
  return *this;
}

VelocityField& VelocityField::operator*=(double a) {
  kernels::scal(a, u.data(), u.size());
  kernels::scal(a, v.data(), v.size());
  return *this;
}

VelocityField operator+(VelocityField a, const VelocityField& b) { return a += b; }
VelocityField operator-(VelocityField a, const VelocityField& b) { return a -= b; }
VelocityField operator*(double a, VelocityField f) { return f *= a; }

double inner(const VelocityField& a, const VelocityField& b) {
  check_same(a.grid, b.grid, "inner");
  return a.grid.cell_area() * (kernels::dot(a.u.data(), b.u.data(), a.u.size()) +
                               kernels::dot(a.v.data(), b.v.data(), a.v.size()));
}

double norm2(const VelocityField& a) { return std::sqrt(inner(a, a)); }

double inner(const TensorField& a, const TensorField& b) {
  check_same(a.grid, b.grid, "inner(tensor)");
  return a.grid.cell_area() *
         kernels::sym_dot(a.a11.data(), a.a12.data(), a.a22.data(),
                          b.a11.data(), b.a12.data(), b.a22.data(), a.a11.size());
}

double quartic_norm4(const TensorField& a) {
  return a.grid.cell_area() *
         kernels::sym_quartic(a.a11.data(), a.a12.data(), a.a22.data(), a.a11.size());
}

double trace3_integral(const TensorField& a) {
  return a.grid.cell_area() *
         kernels::sym_trace3(a.a11.data(), a.a12.data(), a.a22.data(), a.a11.size());
}

double norm2_sq(const TensorField& a) {
  return a.grid.cell_area() *
         kernels::sym_dot(a.a11.data(), a.a12.data(), a.a22.data(),
                          a.a11.data(), a.a12.data(), a.a22.data(), a.a11.size());
}

void center_velocity(const VelocityField& f, std::vector<double>& uc, std::vector<double>& vc) {
  const Grid& g = f.grid;
  uc.assign(static_cast<std::size_t>(g.ncells()), 0.0);
  vc.assign(static_cast<std::size_t>(g.ncells()), 0.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      uc[g.ic(i, j)] = 0.5 * (f.U(i, j) + f.U(i + 1, j));
      vc[g.ic(i, j)] = 0.5 * (f.V(i, j) + f.V(i, j + 1));
    }
}

namespace {

// du/dy at corner nodes with no-slip ghost reflection across the walls.
std::vector<double> node_dudy(const VelocityField& f) {
  const Grid& g = f.grid;
  std::vector<double> s(static_cast<std::size_t>((g.nx + 1) * (g.ny + 1)), 0.0);
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) {
      double val;
      if (j == 0)
        val = 2.0 * f.U(i, 0) / g.hy;
      else if (j == g.ny)
        val = -2.0 * f.U(i, g.ny - 1) / g.hy;
      else
        val = (f.U(i, j) - f.U(i, j - 1)) / g.hy;
      s[g.in(i, j)] = val;
    }
  return s;
}

std::vector<double> node_dvdx(const VelocityField& f) {
  const Grid& g = f.grid;
  std::vector<double> s(static_cast<std::size_t>((g.nx + 1) * (g.ny + 1)), 0.0);
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) {
      double val;
      if (i == 0)
        val = 2.0 * f.V(0, j) / g.hx;
      else if (i == g.nx)
        val = -2.0 * f.V(g.nx - 1, j) / g.hx;
      else
        val = (f.V(i, j) - f.V(i - 1, j)) / g.hx;
      s[g.in(i, j)] = val;
    }
  return s;
}

std::vector<double> nodes_to_centers(const Grid& g, const std::vector<double>& s) {
  std::vector<double> c(static_cast<std::size_t>(g.ncells()), 0.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      c[g.ic(i, j)] = 0.25 * (s[g.in(i, j)] + s[g.in(i + 1, j)] +
                              s[g.in(i, j + 1)] + s[g.in(i + 1, j + 1)]);
  return c;
}

}  // namespace

FieldNorms norms(const VelocityField& f) {
  const Grid& g = f.grid;
  std::vector<double> uc, vc;
  center_velocity(f, uc, vc);
  CenterGradient cg = center_gradient(f);
  double s2 = 0.0, s4 = 0.0, g2 = 0.0, g4 = 0.0;
  for (int c = 0; c < g.ncells(); ++c) {
    const double m = uc[c] * uc[c] + vc[c] * vc[c];
    s2 += m;
    s4 += m * m;
    const double gm = cg.dudx[c] * cg.dudx[c] + cg.dudy[c] * cg.dudy[c] +
                      cg.dvdx[c] * cg.dvdx[c] + cg.dvdy[c] * cg.dvdy[c];
    g2 += gm;
    g4 += gm * gm;
  }
  const double a = g.cell_area();
  FieldNorms n;
  n.L2 = std::sqrt(a * s2);
  n.L4 = std::pow(a * s4, 0.25);
  n.gradL2 = std::sqrt(a * g2);
  n.gradL4 = std::pow(a * g4, 0.25);
  n.W14 = std::pow(a * s4 + a * g4, 0.25);
  return n;
}

double sup_norm_centers(const VelocityField& f) {
  std::vector<double> uc, vc;
  center_velocity(f, uc, vc);
  double m = 0.0;
  for (std::size_t c = 0; c < uc.size(); ++c)
    m = std::max(m, std::sqrt(uc[c] * uc[c] + vc[c] * vc[c]));
  return m;
}

ScalarField divergence(const VelocityField& f) {
  const Grid& g = f.grid;
  ScalarField d(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      d(i, j) = (f.U(i + 1, j) - f.U(i, j)) / g.hx + (f.V(i, j + 1) - f.V(i, j)) / g.hy;
  return d;
}

double max_divergence(const VelocityField& f) {
  ScalarField d = divergence(f);
  double m = 0.0;
  for (double x : d.c) m = std::max(m, std::abs(x));
  return m;
}

VelocityField gradient(const ScalarField& p) {
  const Grid& g = p.grid;
  VelocityField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i)
      out.U(i, j) = (p(i, j) - p(i - 1, j)) / g.hx;
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out.V(i, j) = (p(i, j) - p(i, j - 1)) / g.hy;
  return out;
}

VelocityField laplacian(const VelocityField& f) {
  const Grid& g = f.grid;
  VelocityField out(g);
  const double ihx2 = 1.0 / (g.hx * g.hx), ihy2 = 1.0 / (g.hy * g.hy);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) {
      const double uij = f.U(i, j);
      const double un = (j + 1 < g.ny) ? f.U(i, j + 1) : -uij;
      const double us = (j - 1 >= 0) ? f.U(i, j - 1) : -uij;
      out.U(i, j) = (f.U(i + 1, j) - 2.0 * uij + f.U(i - 1, j)) * ihx2 +
                    (un - 2.0 * uij + us) * ihy2;
    }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double vij = f.V(i, j);
      const double ve = (i + 1 < g.nx) ? f.V(i + 1, j) : -vij;
      const double vw = (i - 1 >= 0) ? f.V(i - 1, j) : -vij;
      out.V(i, j) = (ve - 2.0 * vij + vw) * ihx2 +
                    (f.V(i, j + 1) - 2.0 * vij + f.V(i, j - 1)) * ihy2;
    }
  return out;
}

TensorField sym_gradient(const VelocityField& f) {
  const Grid& g = f.grid;
  TensorField a(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      a.a11[g.ic(i, j)] = 2.0 * (f.U(i + 1, j) - f.U(i, j)) / g.hx;
      a.a22[g.ic(i, j)] = 2.0 * (f.V(i, j + 1) - f.V(i, j)) / g.hy;
    }
  std::vector<double> sn = node_dudy(f);
  std::vector<double> sx = node_dvdx(f);
  for (std::size_t k = 0; k < sn.size(); ++k) sn[k] += sx[k];
  a.a12 = nodes_to_centers(g, sn);
  return a;
}

VelocityField sym_gradient_adjoint(const TensorField& s) {
  const Grid& g = s.grid;
  VelocityField out(g);

  // diagonal parts: transpose of the center differences (factor 2 from A)
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i)
      out.U(i, j) += 2.0 * (s.a11[g.ic(i - 1, j)] - s.a11[g.ic(i, j)]) / g.hx;
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out.V(i, j) += 2.0 * (s.a22[g.ic(i, j - 1)] - s.a22[g.ic(i, j)]) / g.hy;

  // off-diagonal: scatter centers back to nodes (pairing weight 2, averaging
  // weight 1/4), then transpose the nodal du/dy + dv/dx stencils.
  std::vector<double> T(static_cast<std::size_t>((g.nx + 1) * (g.ny + 1)), 0.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double w = 0.5 * s.a12[g.ic(i, j)];  // 2 * 1/4
      T[g.in(i, j)] += w;
      T[g.in(i + 1, j)] += w;
      T[g.in(i, j + 1)] += w;
      T[g.in(i + 1, j + 1)] += w;
    }
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) {
      const double clo = (j == 0) ? 2.0 * T[g.in(i, 0)] : T[g.in(i, j)];
      const double chi = (j == g.ny - 1) ? 2.0 * T[g.in(i, g.ny)] : T[g.in(i, j + 1)];
      out.U(i, j) += (clo - chi) / g.hy;
    }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double clo = (i == 0) ? 2.0 * T[g.in(0, j)] : T[g.in(i, j)];
      const double chi = (i == g.nx - 1) ? 2.0 * T[g.in(g.nx, j)] : T[g.in(i + 1, j)];
      out.V(i, j) += (clo - chi) / g.hx;
    }
  return out;
}

VelocityField div_tensor(const TensorField& s) {
  // -div(S) with S at centers: x-component needs d(s11)/dx at u-faces and
  // d(s12)/dy; s12 is first averaged to nodes.
  const Grid& g = s.grid;
  VelocityField out(g);
  std::vector<double> s12n(static_cast<std::size_t>((g.nx + 1) * (g.ny + 1)), 0.0);
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) {
      double acc = 0.0;
      int cnt = 0;
      for (int dj = -1; dj <= 0; ++dj)
        for (int di = -1; di <= 0; ++di) {
          const int ci = i + di, cj = j + dj;
          if (ci >= 0 && ci < g.nx && cj >= 0 && cj < g.ny) {
            acc += s.a12[g.ic(ci, cj)];
            ++cnt;
          }
        }
      s12n[g.in(i, j)] = cnt ? acc / cnt : 0.0;
    }
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i)
      out.U(i, j) = -((s.a11[g.ic(i, j)] - s.a11[g.ic(i - 1, j)]) / g.hx +
                      (s12n[g.in(i, j + 1)] - s12n[g.in(i, j)]) / g.hy);
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out.V(i, j) = -((s12n[g.in(i + 1, j)] - s12n[g.in(i, j)]) / g.hx +
                      (s.a22[g.ic(i, j)] - s.a22[g.ic(i, j - 1)]) / g.hy);
  return out;
}

CenterGradient center_gradient(const VelocityField& f) {
  const Grid& g = f.grid;
  CenterGradient cg;
  cg.dudx.resize(static_cast<std::size_t>(g.ncells()));
  cg.dvdy.resize(static_cast<std::size_t>(g.ncells()));
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      cg.dudx[g.ic(i, j)] = (f.U(i + 1, j) - f.U(i, j)) / g.hx;
      cg.dvdy[g.ic(i, j)] = (f.V(i, j + 1) - f.V(i, j)) / g.hy;
    }
  cg.dudy = nodes_to_centers(g, node_dudy(f));
  cg.dvdx = nodes_to_centers(g, node_dvdx(f));
  return cg;
}

double max_interior_curl(const VelocityField& f) {
  const Grid& g = f.grid;
  double m = 0.0;
  for (int j = 1; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) {
      const double c = (f.V(i, j) - f.V(i - 1, j)) / g.hx -
                       (f.U(i, j) - f.U(i, j - 1)) / g.hy;
      m = std::max(m, std::abs(c));
    }
  return m;
}

double weighted_mass(const VelocityField& f, const std::vector<double>& w) {
  const Grid& g = f.grid;
  std::vector<double> uc, vc;
  center_velocity(f, uc, vc);
  double s = 0.0;
  for (int c = 0; c < g.ncells(); ++c)
    s += w[static_cast<std::size_t>(c)] * (uc[c] * uc[c] + vc[c] * vc[c]);
  return g.cell_area() * s;
}

}  // namespace tgf
