#include "tgf/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace tgf {

double Grid::diam() const { return std::sqrt(Lx * Lx + Ly * Ly); }

std::uint64_t Grid::hash() const {
  // FNV-1a over the four defining quantities
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
    return h;
  };
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::uint64_t bits;
  static_assert(sizeof(double) == 8);
  __builtin_memcpy(&bits, &Lx, 8); h = mix(h, bits);
  __builtin_memcpy(&bits, &Ly, 8); h = mix(h, bits);
  h = mix(h, static_cast<std::uint64_t>(nx));
  h = mix(h, static_cast<std::uint64_t>(ny));
  return h;
}

Grid build_grid(double Lx, double Ly, int nx, int ny) {
  if (!(Lx > 0.0) || !(Ly > 0.0))
    throw std::invalid_argument("build_grid: domain side lengths must be positive");
  if (nx < 4 || ny < 4)
    throw std::invalid_argument("build_grid: grid too coarse (need nx, ny >= 4)");
  Grid g;
  g.Lx = Lx;
  g.Ly = Ly;
  g.nx = nx;
  g.ny = ny;
  g.hx = Lx / nx;
  g.hy = Ly / ny;
  return g;
}

std::vector<double> cutoff_weight(const Grid& g, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("cutoff_weight: k must be positive");
  std::vector<double> w(static_cast<std::size_t>(g.ncells()));
  const double cx = 0.5 * g.Lx, cy = 0.5 * g.Ly;
  const double inv_k2 = 1.0 / (k * k);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double dx = g.xc(i) - cx;
      const double dy = g.yc(j) - cy;
      const double xi = (dx * dx + dy * dy) * inv_k2;
      double lam;
      if (xi <= 1.0) {
        lam = 0.0;
      } else if (xi >= 2.0) {
        lam = 1.0;
      } else {
        const double s = xi - 1.0;
        lam = s * s * (3.0 - 2.0 * s);
      }
      w[g.ic(i, j)] = lam * lam;
    }
  }
  return w;
}

}  // namespace tgf
