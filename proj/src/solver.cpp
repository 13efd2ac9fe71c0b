#include "tgf/solver.hpp"

#include <chrono>
#include <cmath>

#include "tgf/kernels.hpp"
#include "tgf/rng.hpp"

namespace tgf {

namespace {

double max_a_sq(const TensorField& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.a11.size(); ++i) {
    const double s = a.a11[i] * a.a11[i] + 2.0 * a.a12[i] * a.a12[i] + a.a22[i] * a.a22[i];
    m = std::max(m, s);
  }
  return m;
}

}  // namespace

TransformedSolver::TransformedSolver(const Grid& g, const PhysParams& p,
                                     const IntegrateOptions& opts)
    : grid_(g), params_(p), opts_(opts), P_(g) {
  params_.validate();
}

VelocityField TransformedSolver::cn_solve(const VelocityField& rhs,
                                          const VelocityField& guess, double dt) {
  const double c = 0.5 * params_.nu * dt;
  auto apply = [&](const VelocityField& x) {
    VelocityField ax = P_.stokes_apply(x);
    ax *= c;
    ax += x;
    return ax;
  };
  VelocityField x = guess;
  VelocityField r = rhs - apply(x);
  VelocityField p = r;
  double rr = inner(r, r);
  const double bnorm = norm2(rhs);
  if (bnorm == 0.0) return VelocityField(grid_);
  for (int it = 0; it < opts_.cg_max_iter; ++it) {
    if (std::sqrt(rr) <= opts_.cg_tol * bnorm) return x;
    VelocityField ap = apply(p);
    const double alpha = rr / inner(p, ap);
    kernels::axpy(alpha, p.u.data(), x.u.data(), x.u.size());
    kernels::axpy(alpha, p.v.data(), x.v.data(), x.v.size());
    kernels::axpy(-alpha, ap.u.data(), r.u.data(), r.u.size());
    kernels::axpy(-alpha, ap.v.data(), r.v.data(), r.v.size());
    const double rr_new = inner(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    p *= beta;
    p += r;
    ++cg_iters_;
  }
  throw SolverError("implicit Stokes solve: no convergence, residual " +
                    std::to_string(std::sqrt(rr) / bnorm));
}

VelocityField TransformedSolver::step(const VelocityField& y, const VelocityField& z_half,
                                      double dt) {
  const bool with_z = !z_half.u.empty();
  VelocityField v = y;
  if (with_z) v += z_half;

  TensorField a_v = sym_gradient(v);
  const double a_sq = max_a_sq(a_v);
  if (opts_.enforce_stability) {
    const double h = std::min(grid_.hx, grid_.hy);
    const double bound = opts_.c_stab * h * h / (1.0 + params_.beta * a_sq);
    if (dt > bound)
      throw SolverError("step: dt " + std::to_string(dt) +
                        " exceeds the stability bound " + std::to_string(bound) +
                        " (max |A|^2 = " + std::to_string(a_sq) + ")");
  }

  // explicit terms, assembled raw and projected once inside the rhs
  VelocityField conv = convection_raw(v, v);
  VelocityField cub = cubic_stress_raw(v);
  VelocityField quad;
  const bool with_quad = params_.alpha != 0.0;
  if (with_quad) quad = quadratic_stress_raw(v);

  if (ledger_) {
    ledger_->visc_pair.push_back(-inner(laplacian(y), y));
    const double av4 = quartic_norm4(a_v);
    ledger_->av4.push_back(av4);
    ledger_->a_v_l4_sq.push_back(std::sqrt(av4));
    ledger_->tr3.push_back(trace3_integral(a_v));
    if (with_z) {
      ledger_->conv_z.push_back(inner(conv, z_half));
      ledger_->quad_z.push_back(with_quad ? inner(quad, z_half) : 0.0);
      ledger_->cubic_z.push_back(inner(cub, z_half));
      ledger_->chi_zy.push_back(inner(z_half, y));
    } else {
      ledger_->conv_z.push_back(0.0);
      ledger_->quad_z.push_back(0.0);
      ledger_->cubic_z.push_back(0.0);
      ledger_->chi_zy.push_back(0.0);
    }
    ledger_->f_y.push_back(params_.has_forcing() ? inner(params_.f, y) : 0.0);
  }

  VelocityField rhs_raw = conv;
  if (with_quad) {
    quad *= params_.alpha;
    rhs_raw += quad;
  }
  cub *= params_.beta;
  rhs_raw += cub;
  rhs_raw *= -1.0;
  if (with_z) {
    VelocityField src = z_half;
    src *= params_.chi;
    rhs_raw += src;
  }
  if (params_.has_forcing()) rhs_raw += params_.f;
  rhs_raw *= dt;
  {
    VelocityField lap = laplacian(y);
    lap *= 0.5 * params_.nu * dt;
    rhs_raw += lap;
    rhs_raw += y;
  }
  VelocityField rhs = P_.project(rhs_raw);
  VelocityField y_next = cn_solve(rhs, y, dt);

  const double n0 = norm2(y), n1 = norm2(y_next);
  if (!std::isfinite(n1) || n1 > opts_.blowup_factor * std::max(n0, 1e-300))
    throw SolverError("step: blow-up detected, ||y|| " + std::to_string(n0) + " -> " +
                      std::to_string(n1));
  return y_next;
}

Trajectory TransformedSolver::integrate(const VelocityField& y0, const OUPath& path,
                                        const StokesEigenbasis& basis, double t0,
                                        double t1, double dt) {
  if (!(t1 > t0)) throw std::invalid_argument("integrate: need t1 > t0");
  const auto t_start = std::chrono::steady_clock::now();
  const long n_steps = std::lround((t1 - t0) / dt);
  if (std::abs(t0 + static_cast<double>(n_steps) * dt - t1) > 1e-9 * std::max(1.0, std::abs(t1)))
    throw std::invalid_argument("integrate: (t1 - t0) must be a multiple of dt");
  const bool with_z = path.spec.n_modes > 0;

  Trajectory traj;
  traj.dt = dt;
  VelocityField y = y0;
  if (opts_.restrict_to) y = reconstruct(galerkin_project(y, *opts_.restrict_to), *opts_.restrict_to);
  traj.times.push_back(t0);
  traj.states.push_back(y);

  EnergyLedger& led = traj.ledger;
  ledger_ = &led;
  const long cg0 = cg_iters_;

  VelocityField z_now, z_next, z_half;
  if (with_z) z_now = ou_field(path, basis, t0);

  for (long k = 0; k < n_steps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    led.t.push_back(t);
    led.ysq.push_back(inner(y, y));
    if (with_z) {
      z_next = ou_field(path, basis, t + dt);
      z_half = z_now + z_next;
      z_half *= 0.5;
    }
    y = step(y, z_half, dt);
    if (opts_.restrict_to)
      y = reconstruct(galerkin_project(y, *opts_.restrict_to), *opts_.restrict_to);
    if (with_z) z_now = z_next;

    if (opts_.observer) opts_.observer(k + 1, t + dt, y);

    const bool last = (k + 1 == n_steps);
    if (last || (opts_.store_stride > 0 && (k + 1) % opts_.store_stride == 0)) {
      traj.times.push_back(t + dt);
      traj.states.push_back(y);
    }
  }
  led.ysq.push_back(inner(y, y));
  ledger_ = nullptr;

  traj.total_steps = n_steps;
  traj.cg_iterations = cg_iters_ - cg0;
  traj.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return traj;
}

VelocityField step(const VelocityField& y, const VelocityField& z_now,
                   const VelocityField& z_next, const PhysParams& p, double dt,
                   const IntegrateOptions& opts) {
  TransformedSolver solver(y.grid, p, opts);
  VelocityField z_half;
  if (!z_now.u.empty()) {
    z_half = z_now + z_next;
    z_half *= 0.5;
  }
  return solver.step(y, z_half, dt);
}

Trajectory integrate(const VelocityField& y0, const OUPath& path,
                     const StokesEigenbasis& basis, double t0, double t1,
                     const PhysParams& p, double dt, const IntegrateOptions& opts) {
  TransformedSolver solver(y0.grid, p, opts);
  return solver.integrate(y0, path, basis, t0, t1, dt);
}

EnergyResidual energy_residual(const Trajectory& traj, const PhysParams& p) {
  const EnergyLedger& l = traj.ledger;
  EnergyResidual out;
  const std::size_t n = l.rows();
  if (n == 0) return out;
  out.cumulative.resize(n);
  double cum = 0.0;
  double sum_abs = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double diss =
        2.0 * p.nu * l.visc_pair[k] + p.beta * l.av4[k] + p.alpha * l.tr3[k];
    const double src = l.conv_z[k] + p.alpha * l.quad_z[k] + p.beta * l.cubic_z[k] +
                       p.chi * l.chi_zy[k] + l.f_y[k];
    const double inst = l.ysq[k + 1] - l.ysq[k] + traj.dt * diss - 2.0 * traj.dt * src;
    cum += inst;
    out.cumulative[k] = cum;
    out.max_step = std::max(out.max_step, std::abs(inst));
    sum_abs += std::abs(inst);
    out.max_cum = std::max(out.max_cum, std::abs(cum));
  }
  out.mean_step = sum_abs / static_cast<double>(n);
  out.final_cum = cum;
  return out;
}

PhysicalTrajectory recompose(const Trajectory& traj, const OUPath& path,
                             const StokesEigenbasis& basis) {
  PhysicalTrajectory out;
  out.times = traj.times;
  out.states.reserve(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    if (path.spec.n_modes > 0) {
      out.states.push_back(traj.states[i] + ou_field(path, basis, traj.times[i]));
    } else {
      out.states.push_back(traj.states[i]);
    }
  }
  return out;
}

ContinuityCheck continuity_check(const Trajectory& a, const Trajectory& b,
                                 const PhysParams& p, const OperatorConstants& consts) {
  if (a.times.size() != b.times.size())
    throw std::invalid_argument("continuity_check: trajectories not aligned");
  ContinuityCheck out;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    VelocityField d = a.states[i] - b.states[i];
    out.observed = std::max(out.observed, inner(d, d));
  }
  double integral = 0.0;
  for (double v : b.ledger.a_v_l4_sq) integral += v;
  integral *= b.dt;
  VelocityField d0 = a.states.front() - b.states.front();
  const double cc = consts.c_s3 * consts.c_k;
  out.bound = inner(d0, d0) *
              std::exp(consts.safety * cc * cc / (p.nu * p.eps0()) * integral);
  return out;
}

ChiIndependence chi_independence_check(const VelocityField& x0, std::uint64_t seed,
                                       double chi1, double chi2, double horizon,
                                       const PhysParams& p, const NoiseSpec& spec,
                                       const StokesEigenbasis& basis, double dt,
                                       const IntegrateOptions& opts_in) {
  const Grid& g = x0.grid;
  auto [p1, p2] = ou_path_pair(spec, chi1, chi2, p.nu, 0.0, horizon, dt, seed);

  IntegrateOptions opts = opts_in;
  if (opts.store_stride <= 0)
    opts.store_stride = std::max(1, static_cast<int>(std::lround(horizon / dt)) / 128);

  PhysParams pp1 = p, pp2 = p;
  pp1.chi = chi1;
  pp2.chi = chi2;

  LerayProjector P(g);
  VelocityField x = P.project(x0);
  VelocityField y01 = x - ou_field(p1, basis, 0.0);
  VelocityField y02 = x - ou_field(p2, basis, 0.0);

  Trajectory t1 = integrate(y01, p1, basis, 0.0, horizon, pp1, dt, opts);
  Trajectory t2 = integrate(y02, p2, basis, 0.0, horizon, pp2, dt, opts);
  PhysicalTrajectory v1 = recompose(t1, p1, basis);
  PhysicalTrajectory v2 = recompose(t2, p2, basis);

  ChiIndependence out;
  double vmax = 0.0;
  for (std::size_t i = 0; i < v1.states.size(); ++i) {
    out.discrepancy = std::max(out.discrepancy, norm2(v1.states[i] - v2.states[i]));
    out.transformed_gap = std::max(out.transformed_gap, norm2(t1.states[i] - t2.states[i]));
    vmax = std::max(vmax, norm2(v1.states[i]));
  }
  out.relative = vmax > 0.0 ? out.discrepancy / vmax : 0.0;
  return out;
}

VelocityField pressure_gradient(const VelocityField& y, const VelocityField& z,
                                const VelocityField& dydt, const PhysParams& p,
                                const LerayProjector& P) {
  VelocityField v = y;
  if (!z.u.empty()) v += z;
  VelocityField residual = dydt;
  {
    VelocityField lap = laplacian(y);
    lap *= -p.nu;
    residual += lap;
  }
  residual += convection_raw(v, v);
  if (p.alpha != 0.0) {
    VelocityField q = quadratic_stress_divform(v);
    q *= p.alpha;
    residual += q;
  }
  {
    VelocityField c = cubic_stress_divform(v);
    c *= p.beta;
    residual += c;
  }
  if (!z.u.empty()) {
    VelocityField src = z;
    src *= -p.chi;
    residual += src;
  }
  if (p.has_forcing()) residual -= p.f;
  residual *= -1.0;
  return P.gradient_part(residual);
}

VelocityField trajectory_dydt(const Trajectory& traj, std::size_t idx) {
  const auto& s = traj.states;
  const auto& t = traj.times;
  if (s.size() < 2) throw std::invalid_argument("trajectory_dydt: need >= 2 states");
  if (idx == 0) {
    VelocityField d = s[1] - s[0];
    d *= 1.0 / (t[1] - t[0]);
    return d;
  }
  if (idx + 1 == s.size()) {
    VelocityField d = s[idx] - s[idx - 1];
    d *= 1.0 / (t[idx] - t[idx - 1]);
    return d;
  }
  VelocityField d = s[idx + 1] - s[idx - 1];
  d *= 1.0 / (t[idx + 1] - t[idx - 1]);
  return d;
}

}  // namespace tgf
