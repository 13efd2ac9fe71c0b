#pragma once
// Reference integrator for the mode-truncated system: the m-mode coefficient
// ODE is integrated by an adaptive embedded Runge-Kutta 5(4) scheme at tight
// tolerance, independently of the semi-implicit stepper it cross-validates.
// The running energy-balance integrals are carried as extra ODE components so
// the balance audit is accurate to the ODE tolerance, not to a quadrature of
// stored samples.

#include <vector>

#include "tgf/leray.hpp"
#include "tgf/noise.hpp"
#include "tgf/params.hpp"

namespace tgf {

struct OracleResult {
  std::vector<double> times;
  std::vector<std::vector<double>> coeffs;  // accepted states, c(t)
  // accumulated balance integrals over [t0, t1]
  double int_visc = 0.0;    // int <A y, y>
  double int_av4 = 0.0;     // int ||A(v)||_4^4
  double int_tr3 = 0.0;     // int tr(A(v)^3)
  double int_conv_z = 0.0;  // int <B(v), z>
  double int_quad_z = 0.0;  // int <J(v), z>
  double int_cubic_z = 0.0; // int <K(v), z>
  double int_chi_zy = 0.0;  // int (z, y)
  double int_f_y = 0.0;     // int <f, y>
  long rhs_evals = 0;
  long accepted_steps = 0;
  long rejected_steps = 0;

  const std::vector<double>& final_coeffs() const { return coeffs.back(); }
};

// Integrates the first `m` mode coefficients from c0 over [t0, t1]; the path
// is sampled with linear interpolation at the interior Runge-Kutta stages.
// Throws std::runtime_error if the tolerance cannot be met (step underflow).
OracleResult galerkin_oracle(const std::vector<double>& c0, const OUPath& path,
                             const StokesEigenbasis& basis, double t0, double t1,
                             const PhysParams& p, int m, double tol = 1e-10);

// |c(t1)|^2 - |c0|^2 + dissipation integrals - 2 * source integrals,
// normalized by the scale of the participating terms.
double oracle_energy_residual(const OracleResult& r, const std::vector<double>& c0,
                              const PhysParams& p);

}  // namespace tgf
