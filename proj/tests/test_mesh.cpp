#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tgf/field.hpp"
#include "tgf/field_io.hpp"
#include "tgf/grid.hpp"
#include "tgf/rng.hpp"

using namespace tgf;

namespace {

VelocityField random_field(const Grid& g, Rng& rng, double scale = 1.0) {
  VelocityField f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) f.U(i, j) = scale * rng.next_normal();
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) f.V(i, j) = scale * rng.next_normal();
  return f;
}

}  // namespace

TEST_CASE("build_grid spacing and preconditions") {
  Grid g = build_grid(1.0, 1.0, 8, 8);
  CHECK(g.hx == doctest::Approx(0.125));
  CHECK(g.hy == doctest::Approx(0.125));
  Grid g2 = build_grid(2.0, 1.0, 16, 8);
  CHECK(g2.hx == doctest::Approx(0.125));
  CHECK(g2.hy == doctest::Approx(0.125));
  CHECK_THROWS_WITH_AS(static_cast<void>(build_grid(1.0, 1.0, 3, 8)),
                       doctest::Contains("grid too coarse"), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(build_grid(-1.0, 1.0, 8, 8)), std::invalid_argument);
  CHECK(build_grid(1, 1, 8, 8).hash() != build_grid(1, 1, 8, 16).hash());
}

TEST_CASE("sym_gradient on canonical fields") {
  Grid g = build_grid(1.0, 1.0, 32, 32);

  SUBCASE("zero field") {
    VelocityField z(g);
    TensorField a = sym_gradient(z);
    for (double x : a.a11) CHECK(x == 0.0);
    for (double x : a.a12) CHECK(x == 0.0);
    for (double x : a.a22) CHECK(x == 0.0);
  }

  SUBCASE("linear strain u=x, v=-y gives diag(2,-2) in the interior") {
    VelocityField f(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) f.U(i, j) = g.xf(i);
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) f.V(i, j) = -g.yf(j);
    // this raw field violates the boundary invariant on purpose; only the
    // interior stencil values are checked
    TensorField a = sym_gradient(f);
    for (int j = 2; j < g.ny - 2; ++j)
      for (int i = 2; i < g.nx - 2; ++i) {
        CHECK(a.a11[g.ic(i, j)] == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(a.a22[g.ic(i, j)] == doctest::Approx(-2.0).epsilon(1e-13));
        CHECK(a.a12[g.ic(i, j)] == doctest::Approx(0.0).epsilon(1e-13));
      }
  }

  SUBCASE("rigid rotation is strain-free away from walls") {
    VelocityField f(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) f.U(i, j) = -g.yc(j);
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) f.V(i, j) = g.xc(i);
    TensorField a = sym_gradient(f);
    for (int j = 2; j < g.ny - 2; ++j)
      for (int i = 2; i < g.nx - 2; ++i) {
        CHECK(std::abs(a.a11[g.ic(i, j)]) < 1e-12);
        CHECK(std::abs(a.a12[g.ic(i, j)]) < 1e-12);
        CHECK(std::abs(a.a22[g.ic(i, j)]) < 1e-12);
      }
  }
}

TEST_CASE("sym_gradient is linear") {
  Grid g = build_grid(2.0, 1.0, 24, 12);
  Rng rng(3);
  VelocityField a = random_field(g, rng), b = random_field(g, rng);
  TensorField sab = sym_gradient(a + b);
  TensorField sa = sym_gradient(a), sb = sym_gradient(b);
  for (std::size_t i = 0; i < sab.a11.size(); ++i) {
    CHECK(sab.a11[i] == doctest::Approx(sa.a11[i] + sb.a11[i]).epsilon(1e-12));
    CHECK(sab.a12[i] == doctest::Approx(sa.a12[i] + sb.a12[i]).epsilon(1e-12));
    CHECK(sab.a22[i] == doctest::Approx(sa.a22[i] + sb.a22[i]).epsilon(1e-12));
  }
}

TEST_CASE("norms: zero, homogeneity, constant-field refinement") {
  Rng rng(11);
  Grid g = build_grid(1.0, 1.0, 16, 16);

  VelocityField z(g);
  FieldNorms nz = norms(z);
  CHECK(nz.L2 == 0.0);
  CHECK(nz.L4 == 0.0);
  CHECK(nz.W14 == 0.0);

  VelocityField f = random_field(g, rng);
  FieldNorms n1 = norms(f);
  FieldNorms n2 = norms(2.0 * f);
  CHECK(n2.L2 == doctest::Approx(2.0 * n1.L2).epsilon(1e-14));
  CHECK(n2.L4 == doctest::Approx(2.0 * n1.L4).epsilon(1e-14));
  CHECK(n2.gradL2 == doctest::Approx(2.0 * n1.gradL2).epsilon(1e-14));
  CHECK(n2.gradL4 == doctest::Approx(2.0 * n1.gradL4).epsilon(1e-14));
  CHECK(n2.W14 == doctest::Approx(2.0 * n1.W14).epsilon(1e-14));

  // u=v=1 in the interior: L2 -> sqrt(2), error shrinking with h
  double prev_err = 1e9;
  for (int n : {16, 32, 64}) {
    Grid gr = build_grid(1.0, 1.0, n, n);
    VelocityField c(gr);
    for (int j = 0; j < gr.ny; ++j)
      for (int i = 1; i < gr.nx; ++i) c.U(i, j) = 1.0;
    for (int j = 1; j < gr.ny; ++j)
      for (int i = 0; i < gr.nx; ++i) c.V(i, j) = 1.0;
    const double err = std::abs(norms(c).L2 - std::sqrt(2.0));
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 0.05);
}

TEST_CASE("cutoff weight shape") {
  Grid g = build_grid(4.0, 1.0, 64, 16);

  SUBCASE("support entirely outside the domain") {
    auto w = cutoff_weight(g, g.diam() / 2.0);
    for (double x : w) CHECK(x == 0.0);
  }

  SUBCASE("tiny k gives 1 away from the center") {
    auto w = cutoff_weight(g, 1e-6);
    int ones = 0;
    for (double x : w)
      if (x == 1.0) ++ones;
    CHECK(ones >= g.ncells() - 4);
  }

  SUBCASE("cubic blend midpoint value") {
    // at |x|^2 = 1.5 k^2 the blend gives Lambda = 0.5, Lambda^2 = 0.25
    const double k = 0.3;
    Grid gs = build_grid(2.0, 2.0, 64, 64);
    auto w = cutoff_weight(gs, k);
    // find the cell whose xi is closest to 1.5
    double best = 1e9;
    double val = -1.0;
    for (int j = 0; j < gs.ny; ++j)
      for (int i = 0; i < gs.nx; ++i) {
        const double dx = gs.xc(i) - 1.0, dy = gs.yc(j) - 1.0;
        const double xi = (dx * dx + dy * dy) / (k * k);
        if (std::abs(xi - 1.5) < best) {
          best = std::abs(xi - 1.5);
          val = w[gs.ic(i, j)];
        }
      }
    CHECK(val == doctest::Approx(0.25).epsilon(0.05));
    for (double x : w) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
  }
}

TEST_CASE("adjoint of sym_gradient is exact") {
  Grid g = build_grid(2.0, 1.0, 20, 10);
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    VelocityField w = random_field(g, rng);
    TensorField s(g);
    for (auto& x : s.a11) x = rng.next_normal();
    for (auto& x : s.a12) x = rng.next_normal();
    for (auto& x : s.a22) x = rng.next_normal();
    const double lhs = inner(sym_gradient(w), s);
    const double rhs = inner(w, sym_gradient_adjoint(s));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("field checkpoint round-trip is bit-exact") {
  Grid g = build_grid(4.0, 1.0, 16, 4);
  Rng rng(5);
  VelocityField f = random_field(g, rng);
  const std::string path = "test_field_io.bin";
  save_field(f, path);
  VelocityField f2 = load_field(path);
  REQUIRE(f2.grid.same_layout(f.grid));
  for (std::size_t i = 0; i < f.u.size(); ++i) CHECK(f2.u[i] == f.u[i]);
  for (std::size_t i = 0; i < f.v.size(); ++i) CHECK(f2.v[i] == f.v[i]);
  std::remove(path.c_str());
}
