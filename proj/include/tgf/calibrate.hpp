#pragma once
// Empirical calibration of the discrete constants used by the estimate
// harnesses: the Korn ratio c_k, the sup-embedding ratio c_s3, the smallest
// Stokes eigenvalue lambda_hat, and the energy-inequality source constant
// c_ubd. Ratios are maximized over random zero-boundary / solenoidal fields
// and multiplied by the safety factor at the point of use.

#include <cstdint>
#include <string>

#include "tgf/operators.hpp"
#include "tgf/params.hpp"

namespace tgf {

struct CalibrationReport {
  OperatorConstants constants;
  double poincare_min_ratio = 0.0;  // min E(w) / (lambda_hat ||w||^2), should be >= 1
  double korn_max_ratio = 0.0;      // = constants.c_k before safety
  double sup_max_ratio = 0.0;       // = constants.c_s3 before safety
  double ubd_max_ratio = 0.0;       // = c_ubd / safety
  int n_samples = 0;
  std::uint64_t seed = 0;
  double grid_lx = 0.0, grid_ly = 0.0;
  int grid_nx = 0, grid_ny = 0;

  std::string to_json() const;
};

// n_samples random fields per ratio; lambda_hat from the dense eigensolve on
// small grids, matrix-free otherwise.
CalibrationReport calibrate(const Grid& g, const PhysParams& p, int n_samples,
                            std::uint64_t seed, double safety = 10.0);

}  // namespace tgf
