#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "tgf/noise.hpp"
#include "tgf/properties.hpp"
#include "tgf/rng.hpp"

using namespace tgf;

namespace {

const StokesEigenbasis& basis24() {
  static StokesEigenbasis b = stokes_eigs(build_grid(1.0, 1.0, 24, 24), 8);
  return b;
}

}  // namespace

TEST_CASE("noise spec: power-law amplitudes and preconditions") {
  const StokesEigenbasis& b = basis24();
  CHECK_THROWS_AS(static_cast<void>(make_noise_spec(b, 3, 0.4, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(make_noise_spec(b, b.m + 1, 1.0, 0.0)), std::invalid_argument);

  // sigma = mu^-(s+1+r/2): with s=1, r=0 the exponent is -2
  NoiseSpec spec = make_noise_spec(b, 3, 1.0, 0.0);
  for (int j = 0; j < 3; ++j)
    CHECK(spec.sigma[static_cast<std::size_t>(j)] ==
          doctest::Approx(std::pow(spec.mu[static_cast<std::size_t>(j)], -2.0)).epsilon(1e-14));
  for (int j = 1; j < 3; ++j)
    CHECK(spec.sigma[static_cast<std::size_t>(j)] < spec.sigma[static_cast<std::size_t>(j - 1)]);

  // W14-weighted mode series has a decreasing, summable tail; by the last
  // driven mode the partial sums are Cauchy within 1%
  StokesEigenbasis wide_basis = stokes_eigs(build_grid(1.0, 1.0, 24, 24), 12);
  NoiseSpec wide = make_noise_spec(wide_basis, 12, 1.0, 0.0);
  double total = 0.0;
  std::vector<double> inc;
  for (int j = 0; j < 12; ++j) {
    const double w14 = norms(wide_basis.fields[static_cast<std::size_t>(j)]).W14;
    const double term = wide.sigma[static_cast<std::size_t>(j)] *
                        wide.sigma[static_cast<std::size_t>(j)] * w14 * w14;
    total += term;
    inc.push_back(term);
  }
  for (std::size_t j = 4; j < inc.size(); ++j) CHECK(inc[j] <= inc[j - 2] * (1 + 1e-12));
  CHECK(inc.back() < 0.01 * total);
}

TEST_CASE("zero-amplitude noise gives the zero path") {
  const StokesEigenbasis& b = basis24();
  NoiseSpec spec = make_noise_spec(b, 3, 1.0, 0.0, 0.0);
  OUPath p = ou_path(spec, 0.5, 1.0, -1.0, 1.0, 0.1, 42);
  for (int k = 0; k <= p.n_steps(); ++k)
    CHECK(p.l2_sq_at_index(k) == 0.0);
}

TEST_CASE("ou suite: stationarity, autocorrelation, shifts, independence, KS") {
  for (const auto& c : ou_suite(basis24(), 0.5, 1.0, 555)) {
    INFO(c.name, " value=", c.value, " threshold=", c.threshold);
    CHECK(c.pass);
  }
}

TEST_CASE("shift preconditions") {
  const StokesEigenbasis& b = basis24();
  NoiseSpec spec = make_noise_spec(b, 2, 1.0, 0.0);
  OUPath p = ou_path(spec, 0.0, 1.0, -2.0, 2.0, 0.1, 9);
  CHECK_THROWS_AS(static_cast<void>(shift_path(p, 0.05 / 3.0)), std::invalid_argument);
  OUPath s = shift_path(p, 1.0);
  CHECK_THROWS_AS(static_cast<void>(s.at(1.5)), std::out_of_range);   // 1.5 + 1.0 > 2.0
  CHECK_THROWS_AS(static_cast<void>(s.at(-3.5)), std::out_of_range);
  // s = 0 is the identity
  OUPath id = shift_path(p, 0.0);
  for (double t : {-2.0, -0.4, 0.0, 1.7}) {
    auto a = id.at(t);
    auto bb = p.at(t);
    CHECK(a == bb);
  }
}

TEST_CASE("coupled pair: equal shifts coincide bit-exactly, coupled marginals stay exact") {
  const StokesEigenbasis& b = basis24();
  NoiseSpec spec = make_noise_spec(b, 2, 1.0, 0.0, 1.0);

  auto [p_same_a, p_same_b] = ou_path_pair(spec, 0.7, 0.7, 1.0, 0.0, 1.0, 0.05, 31);
  CHECK(p_same_a.coeffs == p_same_b.coeffs);

  // different shifts: marginal of the second path has the exact stationary
  // variance (statistically) and maximal correlation with the first
  auto [pa, pb] = ou_path_pair(spec, 0.0, 2.0, 1.0, 0.0, 2000.0, 0.05, 77);
  const int n = pa.n_steps();
  const int j = 0;
  const double a2 = 1.0 * spec.mu[0] + 2.0;
  double var = 0.0, mean = 0.0;
  for (int k = 0; k <= n; ++k) mean += pb.at_index(k)[j];
  mean /= (n + 1);
  for (int k = 0; k <= n; ++k) {
    const double d = pb.at_index(k)[j] - mean;
    var += d * d;
  }
  var /= n;
  const double var_exact = spec.sigma[0] * spec.sigma[0] / (2.0 * a2);
  CHECK(std::abs(var / var_exact - 1.0) < 0.08);

  double cab = 0.0, va = 0.0, vb = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double x = pa.at_index(k)[j];
    const double y = pb.at_index(k)[j];
    cab += x * y;
    va += x * x;
    vb += y * y;
  }
  CHECK(cab / std::sqrt(va * vb) > 0.8);  // strongly coupled, same Wiener path
}

TEST_CASE("radius functions: zero path, window monotonicity, tempered decay") {
  const StokesEigenbasis& b = basis24();
  PhysParams p;
  p.nu = 1.0;
  p.alpha = 0.5;
  p.beta = 1.0;
  p.chi = 0.5;

  NoiseSpec zero_spec = make_noise_spec(b, 3, 1.0, 0.0, 0.0);
  OUPath zp = ou_path(zero_spec, p.chi, p.nu, -20.0, 0.5, 0.02, 3);
  RadiusKappas zk = radius_kappas(zp, b, 2.0, -10.0);
  CHECK(zk.k1 == 0.0);
  CHECK(zk.k2 == 0.0);
  CHECK(zk.k3 == 0.0);
  CHECK(zk.k4 == 0.0);

  NoiseSpec spec = make_noise_spec(b, 4, 1.0, 0.0, 1.0);
  OUPath path = ou_path(spec, p.chi, p.nu, -30.0, 0.5, 0.02, 4);
  RadiusKappas narrow = radius_kappas(path, b, 2.0, -5.0);
  RadiusKappas wide = radius_kappas(path, b, 2.0, -25.0);
  CHECK(wide.k3 >= narrow.k3);
  CHECK(wide.k4 >= narrow.k4);

  const double lambda_hat = b.eigenvalues[0];
  for (const auto& c : kappa_decay_suite(b, spec, p, lambda_hat, 20, 99)) {
    INFO(c.name, " value=", c.value);
    CHECK(c.pass);
  }
}

TEST_CASE("path files replay bit-exactly") {
  const StokesEigenbasis& b = basis24();
  NoiseSpec spec = make_noise_spec(b, 3, 1.2, 0.4, 0.7);
  OUPath p = ou_path(spec, 0.3, 1.0, -1.0, 1.0, 0.05, 12345);
  save_path(p, "test_path.bin");
  OUPath q = load_path("test_path.bin");
  CHECK(q.coeffs == p.coeffs);
  CHECK(q.seed == p.seed);
  CHECK(q.dt == p.dt);
  CHECK(q.spec.sigma == p.spec.sigma);
  std::remove("test_path.bin");
}

TEST_CASE("reconstructed field is divergence-free and matches mode sums") {
  const StokesEigenbasis& b = basis24();
  NoiseSpec spec = make_noise_spec(b, 4, 1.0, 0.0, 1.0);
  OUPath p = ou_path(spec, 0.2, 1.0, 0.0, 1.0, 0.1, 21);
  VelocityField z = ou_field(p, b, 0.5);
  CHECK(max_divergence(z) < 1e-10);
  // face-norm equals the coefficient norm (orthonormal modes)
  CHECK(inner(z, z) == doctest::Approx(p.l2_sq_at_index(p.index_of(0.5))).epsilon(1e-12));
}
