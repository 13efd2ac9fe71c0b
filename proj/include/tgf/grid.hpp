#pragma once
// Staggered (MAC) grid on the rectangle [0,Lx] x [0,Ly] with no-slip walls.
//
// Layout: nx*ny cells. x-velocity u lives on x-faces ((nx+1) x ny), y-velocity
// v on y-faces (nx x (ny+1)), scalars on cell centers, and mixed derivatives
// on the (nx+1) x (ny+1) corner nodes. Boundary faces carry exact zeros
// (Dirichlet); tangential no-slip enters stencils through ghost reflection.

#include <cstdint>
#include <vector>

namespace tgf {

struct Grid {
  double Lx = 1.0, Ly = 1.0;
  int nx = 0, ny = 0;
  double hx = 0.0, hy = 0.0;

  // coordinates
  double xc(int i) const { return (i + 0.5) * hx; }   // cell center
  double yc(int j) const { return (j + 0.5) * hy; }
  double xf(int i) const { return i * hx; }           // face/node line
  double yf(int j) const { return j * hy; }

  int ncells() const { return nx * ny; }
  int nu() const { return (nx + 1) * ny; }   // u-face count
  int nv() const { return nx * (ny + 1); }   // v-face count

  int iu(int i, int j) const { return j * (nx + 1) + i; }  // 0<=i<=nx, 0<=j<ny
  int iv(int i, int j) const { return j * nx + i; }        // 0<=i<nx, 0<=j<=ny
  int ic(int i, int j) const { return j * nx + i; }        // cell center
  int in(int i, int j) const { return j * (nx + 1) + i; }  // corner node

  double cell_area() const { return hx * hy; }
  double diam() const;

  std::uint64_t hash() const;

  bool same_layout(const Grid& o) const {
    return nx == o.nx && ny == o.ny && Lx == o.Lx && Ly == o.Ly;
  }
};

// Throws std::invalid_argument on non-positive sizes or counts < 4
// ("grid too coarse").
Grid build_grid(double Lx, double Ly, int nx, int ny);

// Smooth radial cutoff squared, Lambda^2(|x-center|^2 / k^2), sampled at cell
// centers. Lambda is the cubic smoothstep blend 3 s^2 - 2 s^3 with s = xi - 1
// on [1,2]: identically 0 for |x| <= k, identically 1 for |x| >= sqrt(2) k.
std::vector<double> cutoff_weight(const Grid& g, double k);

}  // namespace tgf
