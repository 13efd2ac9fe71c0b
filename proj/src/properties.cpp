#include "tgf/properties.hpp"

#include <algorithm>
#include <cmath>

#include "tgf/kernels.hpp"
#include "tgf/operators.hpp"
#include "tgf/rng.hpp"

namespace tgf {

namespace {

PropertyCheck make(const std::string& name, double value, double threshold, int trials,
                   bool less_is_pass = true) {
  PropertyCheck c;
  c.name = name;
  c.value = value;
  c.threshold = threshold;
  c.trials = trials;
  c.pass = less_is_pass ? (value <= threshold) : (value >= threshold);
  return c;
}

VelocityField interior_supported(const Grid& g, std::uint64_t seed, int margin) {
  VelocityField f = random_field(g, seed);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      if (i < margin || i > g.nx - margin || j < margin || j >= g.ny - margin)
        f.U(i, j) = 0.0;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (i < margin || i >= g.nx - margin || j < margin || j > g.ny - margin)
        f.V(i, j) = 0.0;
  return f;
}

}  // namespace

std::vector<PropertyCheck> operator_identity_suite(const Grid& g, const PhysParams& p,
                                                   int trials, std::uint64_t seed) {
  LerayProjector P(g);
  std::vector<PropertyCheck> out;

  double worst_coercive = 0.0, worst_identity = 0.0, worst_skew = 0.0,
         worst_antisym = 0.0, worst_dual = 0.0, worst_hom = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(t));
    const double amp = 0.2 + 1.8 * (t % 5) / 4.0;

    VelocityField v = random_solenoidal(g, P, s, amp);
    VelocityField u = random_solenoidal(g, P, derive_seed(s, 1), amp);
    VelocityField w = random_solenoidal(g, P, derive_seed(s, 2), amp);

    // cubic pairing = 1/2 ||A||_4^4
    {
      const double lhs = inner(cubic_stress_raw(v), v);
      const double rhs = 0.5 * quartic_norm4(sym_gradient(v));
      worst_coercive = std::max(worst_coercive, std::abs(lhs - rhs) / std::max(rhs, 1e-300));
    }
    // cubic difference identity
    worst_identity = std::max(worst_identity, k_identity_residual(u, v, p.beta));
    // transport neutrality
    {
      VelocityField cv = convection_raw(u, v);
      const double num = std::abs(inner(cv, v));
      const double den = std::max(norm2(cv) * norm2(v), 1e-300);
      worst_skew = std::max(worst_skew, num / den);
    }
    // pairing antisymmetry
    {
      const double a = inner(convection_raw(u, v), w);
      const double b = inner(convection_raw(u, w), v);
      const double den = std::max(std::abs(a), 1e-300);
      worst_antisym = std::max(worst_antisym, std::abs(a + b) / den);
    }
    // weak-form vs divergence-form stress on interior-supported data
    {
      VelocityField vi = interior_supported(g, derive_seed(s, 3), 4);
      VelocityField wi = interior_supported(g, derive_seed(s, 4), 4);
      const double a = inner(quadratic_stress_raw(vi), wi);
      const double b = inner(quadratic_stress_divform(vi), wi);
      const double den = std::max(std::abs(a), std::abs(b));
      if (den > 1e-300) worst_dual = std::max(worst_dual, std::abs(a - b) / den);
      const double c = inner(cubic_stress_raw(vi), wi);
      const double d = inner(cubic_stress_divform(vi), wi);
      const double den2 = std::max(std::abs(c), std::abs(d));
      if (den2 > 1e-300) worst_dual = std::max(worst_dual, std::abs(c - d) / den2);
    }
    // homogeneity: quadratic operator scales with c^2, cubic with c^3
    {
      const double c = 1.7;
      VelocityField q1 = quadratic_stress_raw(c * v);
      VelocityField q2 = quadratic_stress_raw(v);
      q2 *= c * c;
      worst_hom = std::max(worst_hom, norm2(q1 - q2) / std::max(norm2(q1), 1e-300));
      VelocityField k1 = cubic_stress_raw(c * v);
      VelocityField k2 = cubic_stress_raw(v);
      k2 *= c * c * c;
      worst_hom = std::max(worst_hom, norm2(k1 - k2) / std::max(norm2(k1), 1e-300));
    }
  }
  out.push_back(make("cubic pairing equals half quartic strain norm", worst_coercive, 1e-10, trials));
  out.push_back(make("cubic difference identity residual", worst_identity, 1e-9, trials));
  out.push_back(make("transport pairing neutrality", worst_skew, 1e-12, trials));
  out.push_back(make("transport pairing antisymmetry", worst_antisym, 1e-11, trials));
  out.push_back(make("stress weak/divergence route agreement", worst_dual, 1e-10, trials));
  out.push_back(make("stress operator homogeneity", worst_hom, 1e-12, trials));

  // drift continuity along a perturbation-halving sequence
  {
    VelocityField y = random_solenoidal(g, P, derive_seed(seed, 900), 1.0);
    VelocityField d0 = random_solenoidal(g, P, derive_seed(seed, 901), 0.5);
    VelocityField gy = transformed_drift_raw(y, VelocityField(), p);
    double prev = 1e300;
    bool monotone = true;
    double last = 0.0;
    for (int k = 0; k < 8; ++k) {
      VelocityField d = d0;
      d *= std::pow(0.5, k);
      VelocityField gp = transformed_drift_raw(y + d, VelocityField(), p);
      last = norm2(gp - gy);
      if (last > prev * (1.0 + 1e-12)) monotone = false;
      prev = last;
    }
    PropertyCheck c;
    c.name = "drift continuity under perturbation halving";
    c.trials = 8;
    c.value = last / std::max(norm2(gy), 1e-300);
    c.threshold = 1e-2;
    c.pass = monotone && c.value <= c.threshold;
    out.push_back(c);
  }
  return out;
}

std::vector<PropertyCheck> monotonicity_suite(const Grid& g, const PhysParams& p,
                                              const OperatorConstants& consts, int trials,
                                              std::uint64_t seed) {
  LerayProjector P(g);
  int failures = 0;
  double min_gap = 1e300;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed ^ 0x6a0ULL, static_cast<std::uint64_t>(t));
    const double a1 = 0.1 + 2.4 * (t % 7) / 6.0;
    const double a2 = 0.1 + 2.4 * ((t / 7) % 7) / 6.0;
    VelocityField y1 = random_solenoidal(g, P, s, a1);
    VelocityField y2 = random_solenoidal(g, P, derive_seed(s, 1), a2);
    VelocityField z = random_field(g, derive_seed(s, 2), 0.3 * (1 + t % 3));
    MonotonicityGap gap = monotonicity_gap(y1, y2, z, p, consts);
    const double scale = std::max({std::abs(gap.lhs), std::abs(gap.rhs), 1e-300});
    if (!(gap.lhs >= gap.rhs - 1e-10 * scale) || !(gap.rhs >= 0.0)) ++failures;
    min_gap = std::min(min_gap, (gap.lhs - gap.rhs) / scale);
  }
  std::vector<PropertyCheck> out;
  PropertyCheck c;
  c.name = "coercivity gap lhs >= rhs >= 0";
  c.trials = trials;
  c.value = static_cast<double>(failures);
  c.threshold = 0.0;
  c.pass = failures == 0;
  out.push_back(c);
  out.push_back(make("worst normalized gap margin", -min_gap, 0.0, trials));
  return out;
}

std::vector<PropertyCheck> lipschitz_suite(const Grid& g, const PhysParams& p,
                                           double safety, int trials, std::uint64_t seed) {
  LerayProjector P(g);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed ^ 0x11bULL, static_cast<std::uint64_t>(t));
    VelocityField u = random_solenoidal(g, P, s, 0.3 + 1.7 * (t % 4) / 3.0);
    VelocityField v = random_solenoidal(g, P, derive_seed(s, 1), 0.3 + 1.7 * ((t / 4) % 4) / 3.0);
    VelocityField z = random_field(g, derive_seed(s, 2), 0.4);
    LipschitzProbe probe = lipschitz_probe(u, v, z, p, P, 4, derive_seed(s, 3));
    worst = std::max(worst, probe.ratio);
  }
  return {make("lipschitz bound ratio", worst, safety, trials)};
}

std::vector<PropertyCheck> ou_suite(const StokesEigenbasis& basis, double chi, double nu,
                                    std::uint64_t seed) {
  std::vector<PropertyCheck> out;
  NoiseSpec spec = make_noise_spec(basis, std::min(3, basis.m), 1.0, 0.0, 1.0);

  // per-mode stationary variance and lag autocorrelation on long paths
  double worst_var = 0.0, worst_ac = 0.0;
  for (int j = 0; j < spec.n_modes; ++j) {
    const double a = nu * spec.mu[static_cast<std::size_t>(j)] + chi;
    const double sg = spec.sigma[static_cast<std::size_t>(j)];
    const double dt = 0.05 / a;
    const double T = 1.0e4 / a;
    NoiseSpec one = spec;  // evolve all modes; inspect mode j
    OUPath path = ou_path(one, chi, nu, 0.0, T, dt, derive_seed(seed, static_cast<std::uint64_t>(j)));
    const int n = path.n_steps();
    double mean = 0.0;
    for (int k = 0; k <= n; ++k) mean += path.at_index(k)[j];
    mean /= (n + 1);
    double var = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double d = path.at_index(k)[j] - mean;
      var += d * d;
    }
    var /= n;
    const double var_exact = sg * sg / (2.0 * a);
    worst_var = std::max(worst_var, std::abs(var / var_exact - 1.0));

    // ratio estimator: common amplitude fluctuations cancel between the
    // numerator and the empirical variance
    const int lag = std::max(1, static_cast<int>(std::lround(0.5 / (a * dt))));
    double num = 0.0, den = 0.0;
    for (int k = 0; k + lag <= n; ++k) {
      num += (path.at_index(k)[j] - mean) * (path.at_index(k + lag)[j] - mean);
      den += (path.at_index(k)[j] - mean) * (path.at_index(k)[j] - mean);
    }
    const double rho = num / den;
    const double rho_exact = std::exp(-a * lag * dt);
    worst_ac = std::max(worst_ac, std::abs(rho / rho_exact - 1.0));
  }
  out.push_back(make("stationary variance relative error", worst_var, 0.05, spec.n_modes));
  out.push_back(make("lag autocorrelation relative error", worst_ac, 0.05, spec.n_modes));

  // shift equivariance and composition are exact relabelings
  {
    OUPath path = ou_path(spec, chi, nu, -10.0, 10.0, 0.01, derive_seed(seed, 77));
    OUPath s1 = shift_path(path, 1.25);
    OUPath s12 = shift_path(s1, -3.5);
    OUPath direct = shift_path(path, 1.25 - 3.5);
    double worst = 0.0;
    for (double t : {-4.0, -1.0, 0.0, 2.0}) {
      auto za = s12.at(t);
      auto zb = direct.at(t);
      auto zc = path.at(t + 1.25 - 3.5);
      for (int j = 0; j < spec.n_modes; ++j) {
        worst = std::max(worst, std::abs(za[static_cast<std::size_t>(j)] - zb[static_cast<std::size_t>(j)]));
        worst = std::max(worst, std::abs(za[static_cast<std::size_t>(j)] - zc[static_cast<std::size_t>(j)]));
      }
    }
    out.push_back(make("shift equivariance and composition (exact)", worst, 0.0, 4));
  }

  // independent seeds decorrelate
  {
    OUPath pa = ou_path(spec, chi, nu, 0.0, 400.0, 0.05, derive_seed(seed, 101));
    OUPath pb = ou_path(spec, chi, nu, 0.0, 400.0, 0.05, derive_seed(seed, 202));
    const int n = pa.n_steps();
    double worst = 0.0;
    for (int j = 0; j < spec.n_modes; ++j) {
      double ma = 0.0, mb = 0.0;
      for (int k = 0; k <= n; ++k) {
        ma += pa.at_index(k)[j];
        mb += pb.at_index(k)[j];
      }
      ma /= (n + 1);
      mb /= (n + 1);
      double cab = 0.0, va = 0.0, vb = 0.0;
      for (int k = 0; k <= n; ++k) {
        const double da = pa.at_index(k)[j] - ma;
        const double db = pb.at_index(k)[j] - mb;
        cab += da * db;
        va += da * da;
        vb += db * db;
      }
      worst = std::max(worst, std::abs(cab) / std::sqrt(va * vb));
    }
    out.push_back(make("cross-correlation of independent seeds", worst, 0.05, spec.n_modes));
  }

  // standardized innovations are N(0,1): Kolmogorov-Smirnov
  {
    OUPath path = ou_path(spec, chi, nu, 0.0, 10.0, 0.01, derive_seed(seed, 303));
    const int j = 0;
    const double a = path.rates[0];
    const double sg = spec.sigma[0];
    const double decay = std::exp(-a * path.dt);
    const double sd = sg * std::sqrt((1.0 - decay * decay) / (2.0 * a));
    std::vector<double> inn;
    for (int k = 1; k <= std::min(1000, path.n_steps()); ++k)
      inn.push_back((path.at_index(k)[j] - decay * path.at_index(k - 1)[j]) / sd);
    const double pval = ks_normal_pvalue(inn);
    out.push_back(make("innovation normality KS p-value", pval, 0.01,
                       static_cast<int>(inn.size()), /*less_is_pass=*/false));
  }
  return out;
}

std::vector<PropertyCheck> kappa_decay_suite(const StokesEigenbasis& basis,
                                             const NoiseSpec& spec, const PhysParams& p,
                                             double lambda_hat, int n_paths,
                                             std::uint64_t seed, double target) {
  std::vector<PropertyCheck> out;
  const double c_main = p.nu * lambda_hat * (1.0 + 0.5 * p.eps0());
  for (double c : {c_main, 0.25 * c_main}) {
    // resolve the window and keep the shift aligned with the sample grid
    const double dt = std::min(0.02, (8.0 / c) / 128.0);
    const double window = std::ceil(8.0 / c / dt) * dt;
    const double t_big = std::ceil(14.0 / c / dt) * dt;
    double worst = 0.0;
    for (int i = 0; i < n_paths; ++i) {
      OUPath path = ou_path(spec, p.chi, p.nu, -(t_big + window) - 8.0 * dt, 8.0 * dt, dt,
                            derive_seed(seed, static_cast<std::uint64_t>(i)));
      RadiusKappas base = radius_kappas(path, basis, c, -window);
      OUPath shifted = shift_path(path, -t_big);
      RadiusKappas shifted_k = radius_kappas(shifted, basis, c, -window);
      const double w = std::exp(-c * t_big);
      const double floor_sq = 1e-12;
      worst = std::max(worst, w * shifted_k.k1 * shifted_k.k1 /
                                  std::max(base.k1 * base.k1, floor_sq));
      worst = std::max(worst, w * shifted_k.k2 * shifted_k.k2 /
                                  std::max(base.k2 * base.k2, floor_sq));
      worst = std::max(worst, w * shifted_k.k3 * shifted_k.k3 /
                                  std::max(base.k3 * base.k3, floor_sq));
      worst = std::max(worst, w * shifted_k.k4 * shifted_k.k4 /
                                  std::max(base.k4 * base.k4, floor_sq));
    }
    out.push_back(make("tempered decay of radius functions at rate " + std::to_string(c),
                       worst, target, n_paths));
  }
  return out;
}

double ks_normal_pvalue(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  if (n == 0) return 1.0;
  auto Phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = Phi(samples[i]);
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  const double sqn = std::sqrt(static_cast<double>(n));
  const double lam = (sqn + 0.12 + 0.11 / sqn) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k)
    p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace tgf
