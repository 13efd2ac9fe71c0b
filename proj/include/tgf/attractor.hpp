#pragma once
// Pullback experiments: for each horizon T the transformed system is
// integrated from -T (same noise path across horizons) and the recomposed
// state at time 0 is collected into a cloud. On top of the clouds sit the
// absorbing-radius cross-check, Hausdorff semi-distances, weighted tail
// masses, and the Monte Carlo transition / invariant-measure probes.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tgf/calibrate.hpp"
#include "tgf/noise.hpp"
#include "tgf/solver.hpp"

namespace tgf {

struct PullbackOptions {
  std::vector<double> horizons;  // strictly increasing
  int n_members = 6;
  double init_radius = 0.5;      // members sample the ball of this radius
  double dt = 0.02;
  double kappa_window = 10.0;    // quadrature window for the radius functions
  double c_stab = 8.0;
  int threads = 1;
  std::uint64_t member_seed = 7;
};

struct PullbackResult {
  std::vector<double> horizons;
  std::vector<std::vector<VelocityField>> clouds;  // per horizon, recomposed v(0)
  std::vector<double> radii;                       // per horizon, max ||v(0)||
  std::vector<double> semidistances;               // d(cloud_n, cloud_{n-1}), n >= 1
  std::vector<std::string> member_errors;          // nonempty entries are diagnostics
  double absorbing_radius = 0.0;                   // kappa_13 estimate
  double absorption_time = 0.0;                    // empirical absorption horizon
};

PullbackResult pullback_ensemble(const Grid& g, const PhysParams& p, const NoiseSpec& spec,
                                 const StokesEigenbasis& basis, const OperatorConstants& consts,
                                 std::uint64_t path_seed, const PullbackOptions& opts);

// kappa_13 = sqrt(kappa_11^2) + kappa_12 with the calibrated source constant;
// throws std::runtime_error("window too short ...") when the backward tail of
// the weighted integrals is not yet negligible.
double absorbing_radius_estimate(const OUPath& path, const StokesEigenbasis& basis,
                                 const PhysParams& p, const OperatorConstants& consts);

// max over a of min over b of ||a - b||_2; throws on an empty cloud.
double hausdorff_semidistance(const std::vector<VelocityField>& a,
                              const std::vector<VelocityField>& b);

// Weighted exterior mass int Lambda^2(|x|^2/k^2) |v|^2.
double tail_mass(const VelocityField& v, double k);

struct TailDecayTable {
  std::vector<double> eps;                  // thresholds
  std::vector<double> ks;                   // candidate radii
  // k0[e][h]: smallest k with max-over-cloud tail mass <= eps[e] (NaN if none)
  std::vector<std::vector<double>> k0;
};
TailDecayTable tail_decay_study(const PullbackResult& result, const std::vector<double>& ks,
                                const std::vector<double>& eps_list);

using Observable = std::function<double(const VelocityField&)>;

struct MonteCarloStat {
  double mean = 0.0;
  double std_error = 0.0;
  int n = 0;
};

// E[obs(Psi(t, ., init))] over n_omega independent paths.
MonteCarloStat transition_average(const Observable& obs, double t, int n_omega,
                                  const VelocityField& init, const PhysParams& p,
                                  const NoiseSpec& spec, const StokesEigenbasis& basis,
                                  double dt, std::uint64_t master_seed, int threads = 1,
                                  double c_stab = 8.0);

struct ObservableReport {
  std::string name;
  double time_avg = 0.0;        // mean over paths of the window time-average
  double dispersion = 0.0;      // std across paths
  double shifted_avg = 0.0;     // same over the shifted window
  double diff_std_error = 0.0;  // std error of the paired difference
  bool shift_invariant = false; // |avg - shifted| <= 2 * std error
};

struct InvariantMeasureReport {
  std::vector<ObservableReport> observables;
  double burn_in = 0.0, horizon = 0.0, delta = 0.0;
  int n_omega = 0;
};

// decay_rate is nu * lambda_hat * (1 + eps0/2); the burn-in must cover three
// times the absorption horizon implied by it.
InvariantMeasureReport invariant_measure_estimate(
    const Grid& g, const PhysParams& p, const NoiseSpec& spec,
    const StokesEigenbasis& basis, double decay_rate, double burn_in, double horizon,
    int n_omega, const std::vector<std::pair<std::string, Observable>>& observables,
    double dt, std::uint64_t master_seed, int threads = 1, double c_stab = 8.0);

// Named bounded observables of the physical state.
std::vector<std::pair<std::string, Observable>> default_observables();

}  // namespace tgf
