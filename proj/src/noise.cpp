#include "tgf/noise.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "tgf/kernels.hpp"
#include "tgf/rng.hpp"

namespace tgf {

NoiseSpec make_noise_spec(const StokesEigenbasis& basis, int n_modes, double s_exp,
                          double r_exp, double amplitude) {
  if (n_modes < 1 || n_modes > basis.m)
    throw std::invalid_argument("make_noise_spec: n_modes must be in [1, basis.m]");
  if (!(s_exp > 0.5))
    throw std::invalid_argument(
        "make_noise_spec: s_exp must exceed d/4 = 0.5 for a summable mode series");
  NoiseSpec spec;
  spec.n_modes = n_modes;
  spec.s_exp = s_exp;
  spec.r_exp = r_exp;
  spec.amplitude = amplitude;
  spec.mu.assign(basis.eigenvalues.begin(), basis.eigenvalues.begin() + n_modes);
  spec.sigma.resize(static_cast<std::size_t>(n_modes));
  const double expo = -(s_exp + 1.0 + 0.5 * r_exp);
  for (int j = 0; j < n_modes; ++j)
    spec.sigma[static_cast<std::size_t>(j)] = amplitude * std::pow(spec.mu[static_cast<std::size_t>(j)], expo);
  return spec;
}

int OUPath::index_of(double t) const {
  const double x = (t + offset - t_min) / dt;
  const long long k = std::llround(x);
  if (std::abs(x - static_cast<double>(k)) > 1e-6)
    throw std::out_of_range("OUPath: time does not align with the sample grid");
  if (k < 0 || k > n_steps())
    throw std::out_of_range("OUPath: path window exhausted");
  return static_cast<int>(k);
}

std::vector<double> OUPath::at(double t) const {
  const int k = index_of(t);
  return std::vector<double>(at_index(k), at_index(k) + spec.n_modes);
}

std::vector<double> OUPath::at_interp(double t) const {
  const double x = (t + offset - t_min) / dt;
  if (x < -1e-9 || x > n_steps() + 1e-9)
    throw std::out_of_range("OUPath: path window exhausted");
  const int k0 = std::max(0, std::min(n_steps() - 1, static_cast<int>(std::floor(x))));
  const double w = std::min(1.0, std::max(0.0, x - k0));
  std::vector<double> out(static_cast<std::size_t>(spec.n_modes));
  const double* a = at_index(k0);
  const double* b = at_index(k0 + 1);
  for (int j = 0; j < spec.n_modes; ++j)
    out[static_cast<std::size_t>(j)] = (1.0 - w) * a[j] + w * b[j];
  return out;
}

double OUPath::l2_sq_at_index(int k) const {
  const double* z = at_index(k);
  return kernels::sum_sq(z, static_cast<std::size_t>(spec.n_modes));
}

OUPath ou_path(const NoiseSpec& spec, double chi, double nu, double t_min,
               double t_max, double dt, std::uint64_t seed) {
  if (!(dt > 0.0) || !(t_min < t_max))
    throw std::invalid_argument("ou_path: need dt > 0 and t_min < t_max");
  if (chi < 0.0) throw std::invalid_argument("ou_path: chi must be nonnegative");
  OUPath p;
  p.spec = spec;
  p.chi = chi;
  p.nu = nu;
  p.t_min = t_min;
  p.t_max = t_max;
  p.dt = dt;
  p.seed = seed;
  const int n = static_cast<int>(std::ceil((t_max - t_min) / dt - 1e-9));
  p.rates.resize(static_cast<std::size_t>(spec.n_modes));
  p.coeffs.assign(static_cast<std::size_t>(n + 1) * spec.n_modes, 0.0);
  for (int j = 0; j < spec.n_modes; ++j) {
    const double a = nu * spec.mu[static_cast<std::size_t>(j)] + chi;
    p.rates[static_cast<std::size_t>(j)] = a;
    const double sg = spec.sigma[static_cast<std::size_t>(j)];
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
    double z = std::sqrt(sg * sg / (2.0 * a)) * rng.next_normal();
    p.coeffs[static_cast<std::size_t>(j)] = z;
    const double decay = std::exp(-a * dt);
    const double step_sd = sg * std::sqrt((1.0 - decay * decay) / (2.0 * a));
    for (int k = 1; k <= n; ++k) {
      z = decay * z + step_sd * rng.next_normal();
      p.coeffs[static_cast<std::size_t>(k) * spec.n_modes + j] = z;
    }
  }
  return p;
}

std::pair<OUPath, OUPath> ou_path_pair(const NoiseSpec& spec, double chi1, double chi2,
                                       double nu, double t_min, double t_max, double dt,
                                       std::uint64_t seed) {
  OUPath a = ou_path(spec, chi1, nu, t_min, t_max, dt, seed);
  if (chi1 == chi2) return {a, a};

  OUPath b = a;
  b.chi = chi2;
  const int n = a.n_steps();
  for (int j = 0; j < spec.n_modes; ++j) {
    const double mu = spec.mu[static_cast<std::size_t>(j)];
    const double sg = spec.sigma[static_cast<std::size_t>(j)];
    const double a1 = nu * mu + chi1;
    const double a2 = nu * mu + chi2;
    b.rates[static_cast<std::size_t>(j)] = a2;

    // joint law of the two stationary initial values and of the two
    // per-step stochastic integrals driven by the same Wiener path:
    //   Cov(I_k, I_l) = sg^2 (1 - e^{-(a_k + a_l) dt}) / (a_k + a_l)
    auto cov0 = [&](double ak, double al) { return sg * sg / (ak + al); };
    auto covs = [&](double ak, double al) {
      return sg * sg * (1.0 - std::exp(-(ak + al) * dt)) / (ak + al);
    };

    Rng rng(derive_seed(seed ^ 0xa11ce5ULL, static_cast<std::uint64_t>(j)));
    // conditional sampling of component 2 given component 1
    auto cond = [&](double v11, double v12, double v22, double x1_std, double xi2) {
      // x1 = sqrt(v11) x1_std; x2 | x1 ~ N(v12/v11 * x1, v22 - v12^2/v11)
      const double mean = v12 / std::sqrt(v11) * x1_std;
      const double var = std::max(0.0, v22 - v12 * v12 / v11);
      return mean + std::sqrt(var) * xi2;
    };

    // reconstruct path 1's standardized draws from its stored values, then
    // couple path 2 to the same draws
    const double sd1_0 = std::sqrt(cov0(a1, a1));
    double z1_prev = a.coeffs[static_cast<std::size_t>(j)];
    double x1_std = z1_prev / sd1_0;
    double z2 = cond(cov0(a1, a1), cov0(a1, a2), cov0(a2, a2), x1_std, rng.next_normal());
    b.coeffs[static_cast<std::size_t>(j)] = z2;

    const double d1 = std::exp(-a1 * dt), d2 = std::exp(-a2 * dt);
    const double sd1_s = std::sqrt(covs(a1, a1));
    for (int k = 1; k <= n; ++k) {
      const double z1 = a.coeffs[static_cast<std::size_t>(k) * spec.n_modes + j];
      const double i1 = z1 - d1 * z1_prev;
      x1_std = i1 / sd1_s;
      const double i2 = cond(covs(a1, a1), covs(a1, a2), covs(a2, a2), x1_std, rng.next_normal());
      z2 = d2 * z2 + i2;
      b.coeffs[static_cast<std::size_t>(k) * spec.n_modes + j] = z2;
      z1_prev = z1;
    }
  }
  return {a, b};
}

OUPath shift_path(const OUPath& p, double s) {
  const double steps = s / p.dt;
  if (std::abs(steps - std::llround(steps)) > 1e-6)
    throw std::invalid_argument("shift_path: shift must be a multiple of dt");
  OUPath out = p;
  out.offset = p.offset + s;
  if (out.window_hi() < out.window_lo())
    throw std::out_of_range("shift_path: path window exhausted");
  return out;
}

VelocityField ou_field(const OUPath& p, const StokesEigenbasis& basis, double t) {
  std::vector<double> z = p.at(t);
  return reconstruct(z, basis);
}

RadiusKappas radius_kappas(const OUPath& p, const StokesEigenbasis& basis, double c,
                           double window_lo, int stride) {
  const int k_lo = p.index_of(window_lo);
  const int k_hi = p.index_of(0.0);
  if (k_lo >= k_hi) throw std::invalid_argument("radius_kappas: empty window");

  RadiusKappas out;
  out.k1 = std::sqrt(p.l2_sq_at_index(k_hi));

  double sup = 0.0;
  std::vector<double> l2sq(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (int k = k_lo; k <= k_hi; ++k) {
    const double t = p.t_min + k * p.dt - p.offset;
    const double v = p.l2_sq_at_index(k);
    l2sq[static_cast<std::size_t>(k - k_lo)] = v;
    sup = std::max(sup, v * std::exp(c * t));
  }
  out.k2 = std::sqrt(sup);

  // trapezoid for the exponential-weighted integrals
  double i3 = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double t = p.t_min + k * p.dt - p.offset;
    const double w = (k == k_lo || k == k_hi) ? 0.5 : 1.0;
    i3 += w * std::exp(c * t) * l2sq[static_cast<std::size_t>(k - k_lo)];
  }
  out.k3 = std::sqrt(i3 * p.dt);

  if (stride <= 0) stride = std::max(1, static_cast<int>(std::floor(0.05 / p.dt)));
  double i4 = 0.0;
  double prev_t = 0.0, prev_v = 0.0;
  bool have_prev = false;
  for (int k = k_lo; k <= k_hi; k += stride) {
    const int kk = std::min(k, k_hi);
    const double t = p.t_min + kk * p.dt - p.offset;
    VelocityField z = reconstruct(
        std::vector<double>(p.at_index(kk), p.at_index(kk) + p.spec.n_modes), basis);
    const double w14 = norms(z).W14;
    const double v = std::exp(c * t) * w14 * w14 * w14 * w14;
    if (have_prev) i4 += 0.5 * (v + prev_v) * (t - prev_t);
    prev_t = t;
    prev_v = v;
    have_prev = true;
  }
  // close the window at t = 0 if the stride skipped it
  if (prev_t < -1e-12) {
    VelocityField z = reconstruct(
        std::vector<double>(p.at_index(k_hi), p.at_index(k_hi) + p.spec.n_modes), basis);
    const double w14 = norms(z).W14;
    const double v = w14 * w14 * w14 * w14;
    i4 += 0.5 * (v + prev_v) * (0.0 - prev_t);
  }
  out.k4 = std::sqrt(std::max(0.0, i4));
  return out;
}

void save_path(const OUPath& p, const std::string& file) {
  nlohmann::json h;
  h["n_modes"] = p.spec.n_modes;
  h["s_exp"] = p.spec.s_exp;
  h["r_exp"] = p.spec.r_exp;
  h["amplitude"] = p.spec.amplitude;
  h["mu"] = p.spec.mu;
  h["sigma"] = p.spec.sigma;
  h["chi"] = p.chi;
  h["nu"] = p.nu;
  h["t_min"] = p.t_min;
  h["t_max"] = p.t_max;
  h["dt"] = p.dt;
  h["offset"] = p.offset;
  h["seed"] = p.seed;
  const std::string hs = h.dump();
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("save_path: cannot open " + file);
  out.write("TGFP", 4);
  const std::uint32_t n = static_cast<std::uint32_t>(hs.size());
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(hs.data(), hs.size());
  const std::uint64_t count = p.coeffs.size();
  out.write(reinterpret_cast<const char*>(&count), 8);
  out.write(reinterpret_cast<const char*>(p.coeffs.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
  if (!out) throw std::runtime_error("save_path: write failed");
}

OUPath load_path(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("load_path: cannot open " + file);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "TGFP") throw std::runtime_error("load_path: bad magic");
  std::uint32_t n = 0;
  in.read(reinterpret_cast<char*>(&n), 4);
  std::string hs(n, '\0');
  in.read(hs.data(), n);
  nlohmann::json h = nlohmann::json::parse(hs);
  OUPath p;
  p.spec.n_modes = h.at("n_modes").get<int>();
  p.spec.s_exp = h.at("s_exp").get<double>();
  p.spec.r_exp = h.at("r_exp").get<double>();
  p.spec.amplitude = h.at("amplitude").get<double>();
  p.spec.mu = h.at("mu").get<std::vector<double>>();
  p.spec.sigma = h.at("sigma").get<std::vector<double>>();
  p.chi = h.at("chi").get<double>();
  p.nu = h.at("nu").get<double>();
  p.t_min = h.at("t_min").get<double>();
  p.t_max = h.at("t_max").get<double>();
  p.dt = h.at("dt").get<double>();
  p.offset = h.at("offset").get<double>();
  p.seed = h.at("seed").get<std::uint64_t>();
  p.rates.resize(static_cast<std::size_t>(p.spec.n_modes));
  for (int j = 0; j < p.spec.n_modes; ++j)
    p.rates[static_cast<std::size_t>(j)] = p.nu * p.spec.mu[static_cast<std::size_t>(j)] + p.chi;
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&count), 8);
  p.coeffs.resize(count);
  in.read(reinterpret_cast<char*>(p.coeffs.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw std::runtime_error("load_path: truncated payload");
  return p;
}

}  // namespace tgf
