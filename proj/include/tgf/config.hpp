#pragma once
// Experiment configuration: TOML (primary) or JSON, validated at load. All
// randomness comes from explicit seeds in the file (with an optional CLI
// override); reports embed the canonical config hash so reruns are checkable.

#include <cstdint>
#include <string>
#include <vector>

#include "tgf/field.hpp"
#include "tgf/params.hpp"

namespace tgf {

struct ExperimentConfig {
  std::string kind = "simulate";  // simulate | properties | pullback | tails |
                                  // invariant-measure | calibrate | ou-diagnostics
  // [grid]
  double Lx = 4.0, Ly = 1.0;
  int nx = 64, ny = 16;
  // [params]
  double nu = 0.25, alpha = 0.1, beta = 0.5, chi = 0.5;
  std::string forcing = "none";  // none | centered
  double forcing_amplitude = 0.0;
  // [noise]
  int n_modes = 8;
  double s_exp = 1.0, r_exp = 0.0;
  double noise_amplitude = 0.05;
  std::uint64_t seed = 1;
  // [run]
  double dt = 0.02;
  double t_end = 1.0;
  std::vector<double> horizons = {1.0, 2.0, 4.0, 6.0, 9.0, 12.0};
  int n_members = 6;
  double init_radius = 0.5;
  double burn_in = 5.0;
  double horizon = 15.0;
  int n_omega = 20;
  double c_stab = 8.0;
  double kappa_window = 10.0;
  int calib_samples = 2000;
  int property_trials = 100;
  int threads = 0;  // 0: hardware concurrency

  // Every violated field, as human-readable messages; empty means valid.
  std::vector<std::string> validate() const;

  std::string to_canonical_json() const;
  std::uint64_t hash() const;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_toml(const std::string& text);
  static ExperimentConfig from_json(const std::string& text);

  Grid make_grid() const;
  PhysParams make_params(const Grid& g) const;  // includes the forcing field
};

// Divergence-free forcing concentrated near the domain center, scaled to the
// requested amplitude in the L2 norm.
VelocityField centered_forcing(const Grid& g, double amplitude);

}  // namespace tgf
