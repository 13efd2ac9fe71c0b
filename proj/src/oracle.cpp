#include "tgf/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "tgf/kernels.hpp"
#include "tgf/operators.hpp"

namespace tgf {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

}  // namespace

OracleResult galerkin_oracle(const std::vector<double>& c0, const OUPath& path,
                             const StokesEigenbasis& basis, double t0, double t1,
                             const PhysParams& p, int m, double tol) {
  if (m < 1 || m > 16) throw std::invalid_argument("galerkin_oracle: m must be in [1, 16]");
  if (m > basis.m) throw std::invalid_argument("galerkin_oracle: basis too small");
  if (static_cast<int>(c0.size()) != m)
    throw std::invalid_argument("galerkin_oracle: |c0| != m");
  p.validate();

  const int nz = path.spec.n_modes;
  const int dim = m + 8;  // coefficients + running balance integrals
  OracleResult out;

  std::vector<double> f_coeff(static_cast<std::size_t>(m), 0.0);
  if (p.has_forcing())
    for (int i = 0; i < m; ++i)
      f_coeff[static_cast<std::size_t>(i)] = inner(p.f, basis.fields[static_cast<std::size_t>(i)]);

  auto rhs = [&](double t, const std::vector<double>& s, std::vector<double>& ds) {
    ++out.rhs_evals;
    std::vector<double> c(s.begin(), s.begin() + m);
    VelocityField y = reconstruct(c, basis);
    std::vector<double> zc;
    VelocityField v = y;
    if (nz > 0) {
      zc = path.at_interp(t);
      VelocityField z = reconstruct(zc, basis);
      v += z;
    }
    VelocityField conv = convection_raw(v, v);
    VelocityField cub = cubic_stress_raw(v);
    VelocityField w = conv;
    {
      VelocityField tmp = cub;
      tmp *= p.beta;
      w += tmp;
    }
    VelocityField quad;
    if (p.alpha != 0.0) {
      quad = quadratic_stress_raw(v);
      VelocityField tmp = quad;
      tmp *= p.alpha;
      w += tmp;
    }
    for (int i = 0; i < m; ++i) {
      double r = -p.nu * basis.eigenvalues[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)] -
                 inner(w, basis.fields[static_cast<std::size_t>(i)]);
      if (nz > 0 && i < nz) r += p.chi * zc[static_cast<std::size_t>(i)];
      r += f_coeff[static_cast<std::size_t>(i)];
      ds[static_cast<std::size_t>(i)] = r;
    }
    // balance integrands
    TensorField av = sym_gradient(v);
    double visc = 0.0;
    for (int i = 0; i < m; ++i)
      visc += basis.eigenvalues[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
    ds[static_cast<std::size_t>(m) + 0] = visc;
    ds[static_cast<std::size_t>(m) + 1] = quartic_norm4(av);
    ds[static_cast<std::size_t>(m) + 2] = trace3_integral(av);
    if (nz > 0) {
      VelocityField z = reconstruct(zc, basis);
      ds[static_cast<std::size_t>(m) + 3] = inner(conv, z);
      ds[static_cast<std::size_t>(m) + 4] = (p.alpha != 0.0) ? inner(quad, z) : 0.0;
      ds[static_cast<std::size_t>(m) + 5] = inner(cub, z);
      double zy = 0.0;
      for (int i = 0; i < std::min(m, nz); ++i) zy += zc[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
      ds[static_cast<std::size_t>(m) + 6] = zy;
    } else {
      ds[static_cast<std::size_t>(m) + 3] = ds[static_cast<std::size_t>(m) + 4] =
          ds[static_cast<std::size_t>(m) + 5] = ds[static_cast<std::size_t>(m) + 6] = 0.0;
    }
    double fy = 0.0;
    for (int i = 0; i < m; ++i) fy += f_coeff[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
    ds[static_cast<std::size_t>(m) + 7] = fy;
  };

  std::vector<double> s(static_cast<std::size_t>(dim), 0.0);
  for (int i = 0; i < m; ++i) s[static_cast<std::size_t>(i)] = c0[static_cast<std::size_t>(i)];
  double t = t0;
  double h = std::min(1e-3, (t1 - t0) / 10.0);
  out.times.push_back(t);
  out.coeffs.push_back(c0);

  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim),
      tmp(dim), s5(dim);
  rhs(t, s, k1);
  const int max_steps = 2000000;
  for (int it = 0; it < max_steps && t < t1 - 1e-14; ++it) {
    h = std::min(h, t1 - t);
    auto stage = [&](const std::vector<double>& base, std::vector<double>& kout, double tc) {
      rhs(tc, base, kout);
    };
    for (int i = 0; i < dim; ++i) tmp[i] = s[i] + h * A21 * k1[i];
    stage(tmp, k2, t + C2 * h);
    for (int i = 0; i < dim; ++i) tmp[i] = s[i] + h * (A31 * k1[i] + A32 * k2[i]);
    stage(tmp, k3, t + C3 * h);
    for (int i = 0; i < dim; ++i) tmp[i] = s[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    stage(tmp, k4, t + C4 * h);
    for (int i = 0; i < dim; ++i)
      tmp[i] = s[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    stage(tmp, k5, t + C5 * h);
    for (int i = 0; i < dim; ++i)
      tmp[i] = s[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
    stage(tmp, k6, t + h);
    for (int i = 0; i < dim; ++i)
      s5[i] = s[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    stage(s5, k7, t + h);

    double err = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                            E6 * k6[i] + E7 * k7[i]);
      const double sc = tol + tol * std::max(std::abs(s[i]), std::abs(s5[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / dim);

    if (err <= 1.0) {
      t += h;
      s = s5;
      k1 = k7;  // FSAL
      ++out.accepted_steps;
      out.times.push_back(t);
      out.coeffs.emplace_back(s.begin(), s.begin() + m);
    } else {
      ++out.rejected_steps;
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    h = std::max(h * fac, 1e-12);
    if (h < 1e-12)
      throw std::runtime_error("galerkin_oracle: step underflow (tolerance unattainable)");
  }
  if (t < t1 - 1e-10) throw std::runtime_error("galerkin_oracle: max step count exceeded");

  out.int_visc = s[static_cast<std::size_t>(m) + 0];
  out.int_av4 = s[static_cast<std::size_t>(m) + 1];
  out.int_tr3 = s[static_cast<std::size_t>(m) + 2];
  out.int_conv_z = s[static_cast<std::size_t>(m) + 3];
  out.int_quad_z = s[static_cast<std::size_t>(m) + 4];
  out.int_cubic_z = s[static_cast<std::size_t>(m) + 5];
  out.int_chi_zy = s[static_cast<std::size_t>(m) + 6];
  out.int_f_y = s[static_cast<std::size_t>(m) + 7];
  return out;
}

double oracle_energy_residual(const OracleResult& r, const std::vector<double>& c0,
                              const PhysParams& p) {
  double e0 = 0.0, e1 = 0.0;
  for (double c : c0) e0 += c * c;
  for (double c : r.final_coeffs()) e1 += c * c;
  const double diss = 2.0 * p.nu * r.int_visc + p.beta * r.int_av4 + p.alpha * r.int_tr3;
  const double src = r.int_conv_z + p.alpha * r.int_quad_z + p.beta * r.int_cubic_z +
                     p.chi * r.int_chi_zy + r.int_f_y;
  const double resid = e1 - e0 + diss - 2.0 * src;
  const double scale = std::max({e0, e1, std::abs(diss), 2.0 * std::abs(src), 1e-300});
  return std::abs(resid) / scale;
}

}  // namespace tgf
