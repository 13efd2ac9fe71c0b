#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tgf/calibrate.hpp"
#include "tgf/operators.hpp"
#include "tgf/properties.hpp"
#include "tgf/rng.hpp"

using namespace tgf;

namespace {

PhysParams default_params() {
  PhysParams p;
  p.nu = 1.0;
  p.alpha = 1.0;
  p.beta = 1.0;
  p.chi = 0.0;
  return p;
}

// independently coded projected momentum residual for alpha = beta = 0,
// z = 0: nu P(-Lap y) + P(skew transport of y by y)
VelocityField ns_reference(const VelocityField& y, double nu, const LerayProjector& P) {
  const Grid& g = y.grid;
  VelocityField lap(g);
  const double ihx2 = 1.0 / (g.hx * g.hx), ihy2 = 1.0 / (g.hy * g.hy);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) {
      const double c = y.U(i, j);
      const double n = (j + 1 < g.ny) ? y.U(i, j + 1) : -c;
      const double s = (j >= 1) ? y.U(i, j - 1) : -c;
      lap.U(i, j) = (y.U(i + 1, j) - 2 * c + y.U(i - 1, j)) * ihx2 + (n - 2 * c + s) * ihy2;
    }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double c = y.V(i, j);
      const double e = (i + 1 < g.nx) ? y.V(i + 1, j) : -c;
      const double w = (i >= 1) ? y.V(i - 1, j) : -c;
      lap.V(i, j) = (e - 2 * c + w) * ihx2 + (y.V(i, j + 1) - 2 * c + y.V(i, j - 1)) * ihy2;
    }
  lap *= -nu;
  VelocityField conv = convection_raw(y, y);
  return P.project(lap + conv);
}

}  // namespace

TEST_CASE("convection: zero advecting field, neutrality, antisymmetry") {
  Grid g = build_grid(2.0, 1.0, 24, 12);
  LerayProjector P(g);
  Rng rng(41);

  VelocityField zero(g);
  VelocityField v = random_solenoidal(g, P, 1001);
  CHECK(norm2(convection_raw(zero, v)) == 0.0);

  for (int t = 0; t < 100; ++t) {
    VelocityField u = random_solenoidal(g, P, derive_seed(5, static_cast<std::uint64_t>(t)));
    VelocityField w = random_solenoidal(g, P, derive_seed(6, static_cast<std::uint64_t>(t)));
    VelocityField cuv = convection_raw(u, w);
    const double neutral = std::abs(inner(cuv, w)) / std::max(norm2(cuv) * norm2(w), 1e-300);
    CHECK(neutral < 1e-12);
  }

  for (int t = 0; t < 20; ++t) {
    VelocityField u = random_solenoidal(g, P, derive_seed(7, static_cast<std::uint64_t>(t)));
    VelocityField a = random_solenoidal(g, P, derive_seed(8, static_cast<std::uint64_t>(t)));
    VelocityField b = random_solenoidal(g, P, derive_seed(9, static_cast<std::uint64_t>(t)));
    const double x = inner(convection_raw(u, a), b);
    const double y = inner(convection_raw(u, b), a);
    CHECK(std::abs(x + y) < 1e-11 * std::max(std::abs(x), 1.0));
  }
}

TEST_CASE("convection is consistent with the trilinear quadrature") {
  // smooth solenoidal fields; the two routes agree to O(h^2)
  double prev = 1e300;
  for (int n : {16, 32, 64}) {
    Grid g = build_grid(1.0, 1.0, n, n);
    auto psi = [&](int i, int j) {
      const double x = g.xf(i), y = g.yf(j);
      const double b = x * (1 - x) * y * (1 - y);
      return b * b * std::sin(2 * x + 0.3) * std::cos(y);
    };
    auto phi = [&](int i, int j) {
      const double x = g.xf(i), y = g.yf(j);
      const double b = x * (1 - x) * y * (1 - y);
      return b * b * std::cos(3 * y + 1.0);
    };
    VelocityField u(g), v(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 1; i < g.nx; ++i) {
        u.U(i, j) = (psi(i, j + 1) - psi(i, j)) / g.hy;
        v.U(i, j) = (phi(i, j + 1) - phi(i, j)) / g.hy;
      }
    for (int j = 1; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        u.V(i, j) = -(psi(i + 1, j) - psi(i, j)) / g.hx;
        v.V(i, j) = -(phi(i + 1, j) - phi(i, j)) / g.hx;
      }
    LerayProjector P(g);
    VelocityField w = random_solenoidal(g, P, 33);
    const double a = inner(convection_raw(u, v), w);
    const double b = trilinear_quadrature(u, v, w);
    const double err = std::abs(a - b);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("stress operators: zero case and pairing identities") {
  Grid g = build_grid(4.0, 1.0, 32, 8);
  LerayProjector P(g);

  VelocityField zero(g);
  CHECK(norm2(quadratic_stress_raw(zero)) == 0.0);
  CHECK(norm2(cubic_stress_raw(zero)) == 0.0);

  for (int t = 0; t < 100; ++t) {
    VelocityField v = random_solenoidal(g, P, derive_seed(77, static_cast<std::uint64_t>(t)),
                                        0.2 + 0.02 * t);
    // coercive pairing of the cubic operator
    const double lhs = inner(cubic_stress_raw(v), v);
    const double rhs = 0.5 * quartic_norm4(sym_gradient(v));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    // quadratic pairing equals the trace integral over 2
    const double ql = inner(quadratic_stress_raw(v), v);
    const double qr = 0.5 * trace3_integral(sym_gradient(v));
    CHECK(ql == doctest::Approx(qr).epsilon(1e-10));
  }
}

TEST_CASE("operator identity suite passes wholesale") {
  Grid g = build_grid(2.0, 1.0, 24, 12);
  for (const auto& c : operator_identity_suite(g, default_params(), 30, 2024)) {
    INFO(c.name, " value=", c.value, " threshold=", c.threshold);
    CHECK(c.pass);
  }
}

TEST_CASE("drift on an eigenfield decomposes into the three pairings") {
  Grid g = build_grid(1.0, 1.0, 24, 24);
  StokesEigenbasis basis = stokes_eigs(g, 2);
  LerayProjector P(g);
  PhysParams p = default_params();
  p.alpha = 0.7;
  p.beta = 1.3;

  const VelocityField& e1 = basis.fields[0];
  VelocityField gy = transformed_drift_raw(e1, VelocityField(), p);
  const double pairing = inner(gy, e1);
  TensorField a = sym_gradient(e1);
  const double expected = p.nu * basis.eigenvalues[0] +
                          0.5 * p.alpha * trace3_integral(a) +
                          0.5 * p.beta * quartic_norm4(a);
  CHECK(pairing == doctest::Approx(expected).epsilon(1e-10));

  VelocityField zero(g);
  CHECK(norm2(transformed_drift_raw(zero, VelocityField(), p)) == 0.0);
}

TEST_CASE("degenerate parameters reduce the drift to the viscous transport core") {
  Grid g = build_grid(2.0, 1.0, 24, 12);
  LerayProjector P(g);
  PhysParams p;
  p.nu = 0.8;
  p.alpha = 0.0;
  p.beta = 0.0;  // operators accept degenerate moduli; only estimates validate
  VelocityField y = random_solenoidal(g, P, 314, 0.7);
  VelocityField got = transformed_drift(y, VelocityField(), p, P);
  VelocityField ref = ns_reference(y, p.nu, P);
  CHECK(norm2(got - ref) < 1e-12 * std::max(1.0, norm2(ref)));
}

TEST_CASE("cubic difference identity") {
  Grid g = build_grid(2.0, 1.0, 20, 10);
  const double beta = 1.4;
  VelocityField u = random_field(g, 21), v = random_field(g, 22);

  CHECK(k_identity_residual(u, u, beta) == 0.0);
  for (int t = 0; t < 100; ++t)
    CHECK(k_identity_residual(random_field(g, derive_seed(3, static_cast<std::uint64_t>(t))),
                              random_field(g, derive_seed(4, static_cast<std::uint64_t>(t))),
                              beta) < 1e-9);

  // u = -v: both sides equal 2 beta ||A(u)||_4^4
  VelocityField mu = u;
  mu *= -1.0;
  TensorField au = sym_gradient(u);
  const double both = 2.0 * beta * quartic_norm4(au);
  TensorField amu = sym_gradient(mu);
  TensorField cu(g), cmu(g);
  // direct evaluation of the left side
  VelocityField ku = cubic_stress_raw(u), kmu = cubic_stress_raw(mu);
  const double lhs = beta * inner(ku - kmu, u - mu);
  CHECK(lhs == doctest::Approx(both).epsilon(1e-10));
  CHECK(k_identity_residual(u, mu, beta) < 1e-9);
}

TEST_CASE("monotonicity gap with calibrated constants") {
  Grid g = build_grid(2.0, 1.0, 24, 12);
  PhysParams p = default_params();  // nu = beta = 1, alpha = 1 -> eps0 ~ 0.29
  CalibrationReport rep = calibrate(g, p, 400, 99);
  REQUIRE(rep.constants.c_k > 0.0);
  REQUIRE(rep.constants.c_s3 > 0.0);

  LerayProjector P(g);
  VelocityField y = random_solenoidal(g, P, 5, 1.0);
  VelocityField z = random_field(g, 6, 0.5);
  MonotonicityGap same = monotonicity_gap(y, y, z, p, rep.constants);
  CHECK(same.lhs == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(same.rhs == doctest::Approx(0.0).epsilon(1e-12));

  for (const auto& c : monotonicity_suite(g, p, rep.constants, 200, 12345)) {
    INFO(c.name, " value=", c.value);
    CHECK(c.pass);
  }

  // a second admissible parameter point inside the regime
  PhysParams p2 = p;
  p2.alpha = 0.9;  // eps0 ~ 0.36
  for (const auto& c : monotonicity_suite(g, p2, rep.constants, 100, 777)) {
    INFO(c.name, " value=", c.value);
    CHECK(c.pass);
  }

  // alpha = 0 eliminates the quadratic-stress term from the pairing: the gap
  // must coincide with a manual assembly that never touches that operator
  {
    PhysParams p0 = p;
    p0.alpha = 0.0;
    VelocityField y1 = random_solenoidal(g, P, 61, 0.8);
    VelocityField y2 = random_solenoidal(g, P, 62, 1.1);
    VelocityField zz = random_field(g, 63, 0.4);
    MonotonicityGap gap = monotonicity_gap(y1, y2, zz, p0, rep.constants);

    VelocityField v1 = y1 + zz, v2 = y2 + zz, d = y1 - y2;
    VelocityField g1 = laplacian(y1);
    g1 *= -p0.nu;
    g1 += convection_raw(v1, v1);
    {
      VelocityField k1 = cubic_stress_raw(v1);
      k1 *= p0.beta;
      g1 += k1;
    }
    VelocityField g2 = laplacian(y2);
    g2 *= -p0.nu;
    g2 += convection_raw(v2, v2);
    {
      VelocityField k2 = cubic_stress_raw(v2);
      k2 *= p0.beta;
      g2 += k2;
    }
    TensorField a2t = sym_gradient(v2);
    const double damping = rep.constants.safety *
                           std::pow(rep.constants.c_s3 * rep.constants.c_k, 2) /
                           (p0.nu * p0.eps0()) * std::sqrt(quartic_norm4(a2t)) *
                           inner(d, d);
    const double lhs_manual = inner(g1 - g2, d) + damping;
    CHECK(gap.lhs == doctest::Approx(lhs_manual).epsilon(1e-12));
  }

  // regime violation is rejected
  PhysParams bad = p;
  bad.alpha = std::sqrt(2.0 * bad.nu * bad.beta);
  CHECK_THROWS_AS(static_cast<void>(monotonicity_gap(y, y, z, bad, rep.constants)),
                  std::invalid_argument);
}

TEST_CASE("lipschitz probe: degenerate and random triples, transport-bound scaling") {
  Grid g = build_grid(2.0, 1.0, 20, 10);
  LerayProjector P(g);
  PhysParams p = default_params();

  VelocityField u = random_solenoidal(g, P, 51, 1.0);
  VelocityField z = random_field(g, 52, 0.4);
  LipschitzProbe same = lipschitz_probe(u, u, z, p, P, 4, 7);
  CHECK(same.observed == 0.0);
  CHECK(same.ratio == 0.0);

  for (const auto& c : lipschitz_suite(g, p, 10.0, 40, 31)) {
    INFO(c.name, " value=", c.value);
    CHECK(c.pass);
  }

  // with z = 0 the transport difference bound is quadratically homogeneous
  VelocityField v = random_solenoidal(g, P, 53, 1.0);
  auto bound_b = [&](double s) {
    VelocityField us = s * u, vs = s * v;
    FieldNorms nd = norms(us - vs);
    FieldNorms nu_ = norms(us);
    TensorField ad = sym_gradient(us - vs);
    TensorField av = sym_gradient(vs);
    const double a4d = std::pow(quartic_norm4(ad), 0.25);
    const double a4v = std::pow(quartic_norm4(av), 0.25);
    return nu_.L4 * a4d + nd.L4 * a4v;
  };
  const double b1 = bound_b(1.0), b2 = bound_b(2.0);
  CHECK(b2 == doctest::Approx(4.0 * b1).epsilon(1e-12));
}

TEST_CASE("calibration is stable across seeds and refinement") {
  Grid g = build_grid(1.0, 1.0, 32, 32);
  PhysParams p = default_params();
  CalibrationReport a = calibrate(g, p, 1500, 1);
  CalibrationReport b = calibrate(g, p, 1500, 2);
  CHECK(std::abs(a.constants.c_k - b.constants.c_k) < 0.15 * a.constants.c_k);
  CHECK(std::abs(a.constants.c_s3 - b.constants.c_s3) < 0.15 * a.constants.c_s3);

  // lambda_hat equals the dense eigensolve value exactly (same computation)
  StokesEigenbasis basis = stokes_eigs(g, 1);
  CHECK(a.constants.lambda_hat == basis.eigenvalues[0]);

  // Korn ratio is stable under refinement
  CalibrationReport fine = calibrate(build_grid(1.0, 1.0, 48, 48), p, 1500, 1);
  CHECK(std::abs(fine.constants.c_k - a.constants.c_k) < 0.10 * a.constants.c_k);

  // discrete Poincare holds on every sample
  CHECK(a.poincare_min_ratio >= 1.0 - 1e-9);
}
