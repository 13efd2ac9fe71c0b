#pragma once
// Property suites: quantified invariants run over many random inputs. Both
// the test binaries and the `properties` CLI subcommand consume these, so the
// pass/fail logic lives in exactly one place.

#include <cstdint>
#include <string>
#include <vector>

#include "tgf/calibrate.hpp"
#include "tgf/noise.hpp"
#include "tgf/params.hpp"

namespace tgf {

struct PropertyCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured worst case
  double threshold = 0.0;  // limit it was held against
  int trials = 0;
};

// Duality/skew-symmetry identities of the operator assembly.
std::vector<PropertyCheck> operator_identity_suite(const Grid& g, const PhysParams& p,
                                                   int trials, std::uint64_t seed);

// The coercivity gap on random triples: lhs >= rhs >= 0 on every draw.
std::vector<PropertyCheck> monotonicity_suite(const Grid& g, const PhysParams& p,
                                              const OperatorConstants& consts, int trials,
                                              std::uint64_t seed);

// Local Lipschitz bound ratio <= safety on random triples.
std::vector<PropertyCheck> lipschitz_suite(const Grid& g, const PhysParams& p,
                                           double safety, int trials, std::uint64_t seed);

// Stationary moments, autocorrelation, shift equivariance and composition,
// seed independence, and the innovation normality of the mode processes.
std::vector<PropertyCheck> ou_suite(const StokesEigenbasis& basis, double chi, double nu,
                                    std::uint64_t seed);

// e^{-ct} kappa_i(shifted by -t)^2 falls below `target` of its t = 0 value.
std::vector<PropertyCheck> kappa_decay_suite(const StokesEigenbasis& basis,
                                             const NoiseSpec& spec, const PhysParams& p,
                                             double lambda_hat, int n_paths,
                                             std::uint64_t seed, double target = 1e-3);

// One-sample Kolmogorov-Smirnov p-value against the standard normal law.
double ks_normal_pvalue(std::vector<double> samples);

}  // namespace tgf
