#pragma once
// Finite-mode stochastic driving: per-mode amplitudes over the Stokes
// eigenbasis, two-sided stationary Ornstein-Uhlenbeck trajectories with exact
// transitions, the path shift, and the radius functions of the pullback
// machinery.
//
// Per-mode rates are a_j = nu mu_j + chi. A path starts from the stationary
// law at t_min (variance sigma_j^2 / (2 a_j)) and advances by the exact
// transition
//   z(t+dt) = e^{-a dt} z(t) + sigma sqrt((1 - e^{-2 a dt}) / (2a)) xi,
// so stationarity holds scheme-independently. Shifts are pure relabelings.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tgf/leray.hpp"

namespace tgf {

struct NoiseSpec {
  int n_modes = 0;
  double s_exp = 1.0;
  double r_exp = 0.0;
  double amplitude = 1.0;
  std::vector<double> mu;     // driven eigenvalues
  std::vector<double> sigma;  // amplitude * mu_j^-(s_exp + 1 + r_exp/2)
};

// Requires s_exp > 0.5 (d/4 with d = 2) and n_modes <= basis.m.
NoiseSpec make_noise_spec(const StokesEigenbasis& basis, int n_modes, double s_exp,
                          double r_exp, double amplitude = 1.0);

struct OUPath {
  NoiseSpec spec;
  double chi = 0.0, nu = 1.0;
  double t_min = 0.0, t_max = 0.0, dt = 0.0;
  double offset = 0.0;  // shift relabeling, multiple of dt
  std::uint64_t seed = 0;
  std::vector<double> rates;   // nu mu_j + chi
  std::vector<double> coeffs;  // (n_steps+1) x n_modes, row-major in time

  int n_steps() const { return static_cast<int>(coeffs.size() / spec.n_modes) - 1; }
  // valid evaluation window in shifted time
  double window_lo() const { return t_min - offset; }
  double window_hi() const { return t_max - offset; }

  // exact sample index; throws std::out_of_range if t leaves the window or
  // does not align with the sample grid
  int index_of(double t) const;
  const double* at_index(int k) const { return coeffs.data() + static_cast<std::size_t>(k) * spec.n_modes; }
  // per-mode values at an aligned time
  std::vector<double> at(double t) const;
  // linear interpolation for off-grid times (used by the dense-output oracle)
  std::vector<double> at_interp(double t) const;

  double l2_sq_at_index(int k) const;  // ||z||_2^2 = sum z_j^2
};

OUPath ou_path(const NoiseSpec& spec, double chi, double nu, double t_min,
               double t_max, double dt, std::uint64_t seed);

// Two paths driven by the same underlying Wiener realization, differing only
// in chi: per mode and per step the pair of stochastic integrals is sampled
// jointly from its exact bivariate law. chi1 == chi2 yields identical paths.
std::pair<OUPath, OUPath> ou_path_pair(const NoiseSpec& spec, double chi1, double chi2,
                                       double nu, double t_min, double t_max, double dt,
                                       std::uint64_t seed);

// Relabeling z_s(t) = z(t+s); composes additively. Throws std::out_of_range
// when the requested window leaves the sampled one (extension is disabled).
OUPath shift_path(const OUPath& p, double s);

// Field reconstruction z(t) = sum_j z_j(t) e_j.
VelocityField ou_field(const OUPath& p, const StokesEigenbasis& basis, double t);

struct RadiusKappas {
  double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0;  // the kappa values (not squared)
};

// kappa_1^2 = ||z(0)||^2, kappa_2^2 = sup_{s in [w,0]} ||z(s)||^2 e^{cs},
// kappa_3^2 = int_w^0 e^{ct} ||z||^2 dt, kappa_4^2 = int_w^0 e^{ct} ||z||_W14^4 dt.
// `stride` subsamples the kappa_4 quadrature (trapezoid); 0 = auto.
RadiusKappas radius_kappas(const OUPath& p, const StokesEigenbasis& basis, double c,
                           double window_lo, int stride = 0);

// Path file: JSON header + binary coefficient matrix, bit-exact replay.
void save_path(const OUPath& p, const std::string& path);
OUPath load_path(const std::string& path);

}  // namespace tgf
