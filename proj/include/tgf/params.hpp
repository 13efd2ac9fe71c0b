#pragma once
// Physical parameters of the third-grade model. The admissible regime is
// |alpha| < sqrt(2 nu beta), which makes eps0 = 1 - sqrt(alpha^2/(2 beta nu))
// land in (0,1).

#include <cmath>
#include <stdexcept>

#include "tgf/field.hpp"

namespace tgf {

struct PhysParams {
  double nu = 1.0;      // viscosity, > 0
  double alpha = 0.0;   // quadratic stress modulus
  double beta = 1.0;    // cubic stress modulus, > 0
  double chi = 0.0;     // damping shift of the noise process, >= 0
  VelocityField f;      // time-independent forcing (may be empty for f = 0)

  double eps0() const { return 1.0 - std::sqrt(alpha * alpha / (2.0 * beta * nu)); }

  void validate() const {
    if (!(nu > 0.0)) throw std::invalid_argument("params: nu must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("params: beta must be positive");
    if (chi < 0.0) throw std::invalid_argument("params: chi must be nonnegative");
    if (!(std::abs(alpha) < std::sqrt(2.0 * nu * beta)))
      throw std::invalid_argument(
          "params: parameter regime violated, need |alpha| < sqrt(2*nu*beta)");
  }

  bool has_forcing() const { return !f.u.empty(); }
};

}  // namespace tgf
