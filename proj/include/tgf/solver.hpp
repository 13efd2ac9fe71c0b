#pragma once
// Time integration of the transformed system
//   dy/dt = -nu A y - B(y+z) - alpha J(y+z) - beta K(y+z) + chi z + P f.
//
// One step treats the Stokes part implicitly (Crank-Nicolson, conjugate
// gradients on the projected operator) and the nonlinear terms explicitly at
// the current state, with z frozen at the midpoint of the step. Every step
// appends one row to the energy ledger, from which the discrete energy
// balance is audited after the fact.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tgf/field.hpp"
#include "tgf/leray.hpp"
#include "tgf/noise.hpp"
#include "tgf/operators.hpp"
#include "tgf/params.hpp"

namespace tgf {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnergyLedger {
  // step-start samples; ysq has one extra row for the final state
  std::vector<double> t;
  std::vector<double> ysq;        // ||y||_2^2
  std::vector<double> visc_pair;  // <A y, y>
  std::vector<double> av4;        // ||A(y+z)||_4^4
  std::vector<double> tr3;        // int tr(A(y+z)^3)
  std::vector<double> conv_z;     // <B(y+z), z>
  std::vector<double> quad_z;     // <J(y+z), z>
  std::vector<double> cubic_z;    // <K(y+z), z>
  std::vector<double> chi_zy;     // (z, y)
  std::vector<double> f_y;        // <f, y>
  std::vector<double> a_v_l4_sq;  // ||A(y+z)||_4^2

  std::size_t rows() const { return t.size(); }
};

struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;          // times of the stored states
  std::vector<VelocityField> states;  // y at stored times (first and last always kept)
  EnergyLedger ledger;
  long total_steps = 0;
  long cg_iterations = 0;
  double wall_seconds = 0.0;

  const VelocityField& initial() const { return states.front(); }
  const VelocityField& final_state() const { return states.back(); }
};

struct IntegrateOptions {
  int store_stride = 0;        // 0: store only first/last; k: every k-th step
  const StokesEigenbasis* restrict_to = nullptr;  // re-project onto this span each step
  double cg_tol = 1e-11;
  int cg_max_iter = 500;
  double c_stab = 0.25;        // stability guard dt <= c_stab h^2 / (1 + beta max|A|^2)
  bool enforce_stability = true;
  double blowup_factor = 1e6;  // per-step norm growth abort threshold
  // called after each accepted step with (step index, time, state)
  std::function<void(long, double, const VelocityField&)> observer;
};

class TransformedSolver {
 public:
  TransformedSolver(const Grid& g, const PhysParams& p, const IntegrateOptions& opts = {});

  // One semi-implicit step; z_half may be an empty field for z = 0.
  VelocityField step(const VelocityField& y, const VelocityField& z_half, double dt);

  // Steps from t0 to t1 with the path sampled at step endpoints (midpoint
  // average); dt must be an integer multiple of the path resolution.
  Trajectory integrate(const VelocityField& y0, const OUPath& path,
                       const StokesEigenbasis& basis, double t0, double t1, double dt);

  const LerayProjector& projector() const { return P_; }
  long cg_iterations() const { return cg_iters_; }

 private:
  Grid grid_;
  PhysParams params_;
  IntegrateOptions opts_;
  LerayProjector P_;
  long cg_iters_ = 0;
  EnergyLedger* ledger_ = nullptr;  // set during integrate

  VelocityField cn_solve(const VelocityField& rhs, const VelocityField& guess, double dt);
};

// Free-function form: z at the two step endpoints, averaged internally.
VelocityField step(const VelocityField& y, const VelocityField& z_now,
                   const VelocityField& z_next, const PhysParams& p, double dt,
                   const IntegrateOptions& opts = {});

Trajectory integrate(const VelocityField& y0, const OUPath& path,
                     const StokesEigenbasis& basis, double t0, double t1,
                     const PhysParams& p, double dt, const IntegrateOptions& opts = {});

// Discrete residual of the cumulative energy balance along the trajectory.
struct EnergyResidual {
  double max_step = 0.0;   // max |per-step residual|
  double mean_step = 0.0;
  double max_cum = 0.0;    // max |cumulative residual|
  double final_cum = 0.0;
  std::vector<double> cumulative;
};
EnergyResidual energy_residual(const Trajectory& traj, const PhysParams& p);

// Doss-Sussmann recomposition v(t) = y(t) + z(t) at the stored times.
struct PhysicalTrajectory {
  std::vector<double> times;
  std::vector<VelocityField> states;
};
PhysicalTrajectory recompose(const Trajectory& traj, const OUPath& path,
                             const StokesEigenbasis& basis);

// Continuity of the solution map in the initial data: observed sup-distance
// against the exponential bound assembled from the ledger of the second run.
struct ContinuityCheck {
  double observed = 0.0;  // sup_t ||y_a - y_b||^2
  double bound = 0.0;
};
ContinuityCheck continuity_check(const Trajectory& a, const Trajectory& b,
                                 const PhysParams& p, const OperatorConstants& consts);

// Recomposed trajectories for two damping shifts driven by the same Wiener
// increments; returns the sup relative discrepancy of v over stored times.
struct ChiIndependence {
  double discrepancy = 0.0;       // sup_t ||v1 - v2||
  double relative = 0.0;          // discrepancy / sup_t ||v1||
  double transformed_gap = 0.0;   // sup_t ||y1 - y2|| (not small by design)
};
ChiIndependence chi_independence_check(const VelocityField& x0, std::uint64_t seed,
                                       double chi1, double chi2, double horizon,
                                       const PhysParams& p, const NoiseSpec& spec,
                                       const StokesEigenbasis& basis, double dt,
                                       const IntegrateOptions& opts = {});

// Appendix-style pressure-gradient recovery: the non-solenoidal part of the
// unprojected momentum residual. dydt comes from finite differences of the
// stored trajectory.
VelocityField pressure_gradient(const VelocityField& y, const VelocityField& z,
                                const VelocityField& dydt, const PhysParams& p,
                                const LerayProjector& P);

// Centered finite difference of the stored states (one-sided at the ends).
VelocityField trajectory_dydt(const Trajectory& traj, std::size_t idx);

}  // namespace tgf
