#include "tgf/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "tgf/rng.hpp"

namespace tgf {

namespace {

// index-parallel loop with deterministic result placement
void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, threads);
  if (threads == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const int nw = std::min(threads, n);
  for (int w = 0; w < nw; ++w)
    pool.emplace_back([&, w]() {
      for (int i = w; i < n; i += nw) body(i);
    });
  for (auto& th : pool) th.join();
}

double exp_window_integral(double c, double lo) {
  // int_lo^0 e^{ct} dt
  return (1.0 - std::exp(c * lo)) / c;
}

}  // namespace

double absorbing_radius_estimate(const OUPath& path, const StokesEigenbasis& basis,
                                 const PhysParams& p, const OperatorConstants& consts) {
  const double c = p.nu * consts.lambda_hat * (1.0 + 0.5 * p.eps0());
  const double lo = path.window_lo();
  if (lo >= 0.0) throw std::invalid_argument("absorbing_radius_estimate: window must reach below 0");

  RadiusKappas full = radius_kappas(path, basis, c, lo);
  // window-length check: the quarter of the window closest to -infinity must
  // contribute less than 1% of the integral terms
  RadiusKappas trimmed = radius_kappas(path, basis, c, 0.75 * lo);
  const double tail3 = full.k3 * full.k3 - trimmed.k3 * trimmed.k3;
  const double tail4 = full.k4 * full.k4 - trimmed.k4 * trimmed.k4;
  if (tail3 > 0.01 * full.k3 * full.k3 + 1e-300 || tail4 > 0.01 * full.k4 * full.k4 + 1e-300)
    throw std::runtime_error("absorbing_radius_estimate: window too short, backward tail above 1%");

  const double f_sq = p.has_forcing() ? inner(p.f, p.f) : 0.0;
  const double k11_sq = 2.0 + 2.0 * full.k2 * full.k2 +
                        consts.c_ubd * (full.k3 * full.k3 + full.k4 * full.k4 +
                                        f_sq * exp_window_integral(c, lo));
  const double k12 = full.k1;
  return std::sqrt(k11_sq) + k12;
}

double hausdorff_semidistance(const std::vector<VelocityField>& a,
                              const std::vector<VelocityField>& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("hausdorff_semidistance: empty cloud");
  double worst = 0.0;
  for (const auto& x : a) {
    double best = 1e300;
    for (const auto& y : b) best = std::min(best, norm2(x - y));
    worst = std::max(worst, best);
  }
  return worst;
}

double tail_mass(const VelocityField& v, double k) {
  return weighted_mass(v, cutoff_weight(v.grid, k));
}

PullbackResult pullback_ensemble(const Grid& g, const PhysParams& p, const NoiseSpec& spec,
                                 const StokesEigenbasis& basis, const OperatorConstants& consts,
                                 std::uint64_t path_seed, const PullbackOptions& opts) {
  p.validate();
  if (opts.horizons.empty()) throw std::invalid_argument("pullback_ensemble: no horizons");
  for (std::size_t i = 1; i < opts.horizons.size(); ++i)
    if (opts.horizons[i] <= opts.horizons[i - 1])
      throw std::invalid_argument("pullback_ensemble: horizons must increase");

  const double t_max_h = opts.horizons.back();
  OUPath path = ou_path(spec, p.chi, p.nu, -(t_max_h + opts.kappa_window), 0.0, opts.dt,
                        path_seed);

  // members: solenoidal fields spread across the initial ball
  std::vector<VelocityField> init;
  LerayProjector P(g);
  for (int i = 0; i < opts.n_members; ++i) {
    const double r = opts.init_radius * static_cast<double>(i + 1) /
                     static_cast<double>(opts.n_members);
    init.push_back(random_solenoidal(g, P, derive_seed(opts.member_seed, static_cast<std::uint64_t>(i)), r));
  }

  PullbackResult out;
  out.horizons = opts.horizons;
  out.clouds.resize(opts.horizons.size());
  out.member_errors.assign(static_cast<std::size_t>(opts.n_members), "");

  const int nH = static_cast<int>(opts.horizons.size());
  std::vector<std::vector<VelocityField>> states(
      static_cast<std::size_t>(nH), std::vector<VelocityField>());
  std::vector<std::vector<int>> ok(static_cast<std::size_t>(nH));
  for (auto& v : states) v.resize(static_cast<std::size_t>(opts.n_members));
  for (auto& v : ok) v.assign(static_cast<std::size_t>(opts.n_members), 0);

  IntegrateOptions iopts;
  iopts.c_stab = opts.c_stab;

  parallel_for(nH * opts.n_members, opts.threads, [&](int idx) {
    const int h = idx / opts.n_members;
    const int mbr = idx % opts.n_members;
    const double T = opts.horizons[static_cast<std::size_t>(h)];
    try {
      VelocityField y0 = init[static_cast<std::size_t>(mbr)] - ou_field(path, basis, -T);
      Trajectory traj = integrate(y0, path, basis, -T, 0.0, p, opts.dt, iopts);
      VelocityField v0 = traj.final_state() + ou_field(path, basis, 0.0);
      states[static_cast<std::size_t>(h)][static_cast<std::size_t>(mbr)] = std::move(v0);
      ok[static_cast<std::size_t>(h)][static_cast<std::size_t>(mbr)] = 1;
    } catch (const std::exception& e) {
      out.member_errors[static_cast<std::size_t>(mbr)] =
          "horizon " + std::to_string(T) + ": " + e.what();
    }
  });

  for (int h = 0; h < nH; ++h) {
    double radius = 0.0;
    for (int mbr = 0; mbr < opts.n_members; ++mbr)
      if (ok[static_cast<std::size_t>(h)][static_cast<std::size_t>(mbr)]) {
        out.clouds[static_cast<std::size_t>(h)].push_back(
            std::move(states[static_cast<std::size_t>(h)][static_cast<std::size_t>(mbr)]));
        radius = std::max(radius, norm2(out.clouds[static_cast<std::size_t>(h)].back()));
      }
    out.radii.push_back(radius);
    if (h > 0)
      out.semidistances.push_back(hausdorff_semidistance(
          out.clouds[static_cast<std::size_t>(h)], out.clouds[static_cast<std::size_t>(h - 1)]));
  }

  out.absorbing_radius = absorbing_radius_estimate(path, basis, p, consts);
  const double c = p.nu * consts.lambda_hat * (1.0 + 0.5 * p.eps0());
  const double r2 = std::max(1.0, opts.init_radius * opts.init_radius);
  out.absorption_time = std::max(1.0, std::log(r2) / c);
  return out;
}

TailDecayTable tail_decay_study(const PullbackResult& result, const std::vector<double>& ks,
                                const std::vector<double>& eps_list) {
  TailDecayTable table;
  table.eps = eps_list;
  table.ks = ks;
  table.k0.assign(eps_list.size(), std::vector<double>(result.clouds.size(),
                                                       std::numeric_limits<double>::quiet_NaN()));
  // tail masses are monotone in k, so scan ks in increasing order
  std::vector<double> sorted_ks = ks;
  std::sort(sorted_ks.begin(), sorted_ks.end());
  for (std::size_t h = 0; h < result.clouds.size(); ++h) {
    std::vector<double> max_mass(sorted_ks.size(), 0.0);
    for (std::size_t ki = 0; ki < sorted_ks.size(); ++ki)
      for (const auto& v : result.clouds[h])
        max_mass[ki] = std::max(max_mass[ki], tail_mass(v, sorted_ks[ki]));
    for (std::size_t e = 0; e < eps_list.size(); ++e)
      for (std::size_t ki = 0; ki < sorted_ks.size(); ++ki)
        if (max_mass[ki] <= eps_list[e]) {
          table.k0[e][h] = sorted_ks[ki];
          break;
        }
  }
  return table;
}

MonteCarloStat transition_average(const Observable& obs, double t, int n_omega,
                                  const VelocityField& init, const PhysParams& p,
                                  const NoiseSpec& spec, const StokesEigenbasis& basis,
                                  double dt, std::uint64_t master_seed, int threads,
                                  double c_stab) {
  MonteCarloStat stat;
  if (t == 0.0) {
    stat.mean = obs(init);
    stat.std_error = 0.0;
    stat.n = n_omega;
    return stat;
  }
  std::vector<double> vals(static_cast<std::size_t>(n_omega), 0.0);
  IntegrateOptions iopts;
  iopts.c_stab = c_stab;
  parallel_for(n_omega, threads, [&](int i) {
    OUPath path = ou_path(spec, p.chi, p.nu, 0.0, t, dt,
                          derive_seed(master_seed, static_cast<std::uint64_t>(i)));
    VelocityField y0 = init - ou_field(path, basis, 0.0);
    Trajectory traj = integrate(y0, path, basis, 0.0, t, p, dt, iopts);
    VelocityField v = traj.final_state() + ou_field(path, basis, t);
    vals[static_cast<std::size_t>(i)] = obs(v);
  });
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= static_cast<double>(n_omega);
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= std::max(1, n_omega - 1);
  stat.mean = mean;
  stat.std_error = std::sqrt(var / n_omega);
  stat.n = n_omega;
  return stat;
}

InvariantMeasureReport invariant_measure_estimate(
    const Grid& g, const PhysParams& p, const NoiseSpec& spec,
    const StokesEigenbasis& basis, double decay_rate, double burn_in, double horizon,
    int n_omega, const std::vector<std::pair<std::string, Observable>>& observables,
    double dt, std::uint64_t master_seed, int threads, double c_stab) {
  if (!(decay_rate > 0.0))
    throw std::invalid_argument("invariant_measure_estimate: decay_rate must be positive");
  const double t_abs = std::max(1.0, 1.0 / decay_rate);
  if (burn_in < 3.0 * t_abs)
    throw std::invalid_argument("invariant_measure_estimate: burn_in below 3x the absorption time");
  if (!(horizon > burn_in))
    throw std::invalid_argument("invariant_measure_estimate: horizon must exceed burn_in");

  const double delta = (horizon - burn_in) / 10.0;
  const double t_end = horizon + delta;
  const int n_obs = static_cast<int>(observables.size());

  // per path, per observable: time averages over the two windows
  std::vector<std::vector<double>> avg1(static_cast<std::size_t>(n_omega),
                                        std::vector<double>(n_obs, 0.0));
  std::vector<std::vector<double>> avg2 = avg1;

  IntegrateOptions base;
  base.c_stab = c_stab;
  parallel_for(n_omega, threads, [&](int i) {
    OUPath path = ou_path(spec, p.chi, p.nu, 0.0, t_end, dt,
                          derive_seed(master_seed, static_cast<std::uint64_t>(i)));
    VelocityField y0(g);  // start from rest
    {
      VelocityField z0 = ou_field(path, basis, 0.0);
      y0 -= z0;
    }
    std::vector<double> acc1(static_cast<std::size_t>(n_obs), 0.0);
    std::vector<double> acc2(static_cast<std::size_t>(n_obs), 0.0);
    long n1 = 0, n2 = 0;
    IntegrateOptions iopts = base;
    iopts.observer = [&](long, double t, const VelocityField& y) {
      const bool w1 = (t >= burn_in - 1e-12 && t <= horizon + 1e-12);
      const bool w2 = (t >= burn_in + delta - 1e-12 && t <= horizon + delta + 1e-12);
      if (!w1 && !w2) return;
      VelocityField v = y + ou_field(path, basis, t);
      for (int o = 0; o < n_obs; ++o) {
        const double val = observables[static_cast<std::size_t>(o)].second(v);
        if (w1) acc1[static_cast<std::size_t>(o)] += val;
        if (w2) acc2[static_cast<std::size_t>(o)] += val;
      }
      if (w1) ++n1;
      if (w2) ++n2;
    };
    Trajectory traj = integrate(y0, path, basis, 0.0, t_end, p, dt, iopts);
    (void)traj;
    for (int o = 0; o < n_obs; ++o) {
      avg1[static_cast<std::size_t>(i)][static_cast<std::size_t>(o)] =
          acc1[static_cast<std::size_t>(o)] / std::max(1L, n1);
      avg2[static_cast<std::size_t>(i)][static_cast<std::size_t>(o)] =
          acc2[static_cast<std::size_t>(o)] / std::max(1L, n2);
    }
  });

  InvariantMeasureReport rep;
  rep.burn_in = burn_in;
  rep.horizon = horizon;
  rep.delta = delta;
  rep.n_omega = n_omega;
  for (int o = 0; o < n_obs; ++o) {
    ObservableReport r;
    r.name = observables[static_cast<std::size_t>(o)].first;
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n_omega; ++i) {
      m1 += avg1[static_cast<std::size_t>(i)][static_cast<std::size_t>(o)];
      m2 += avg2[static_cast<std::size_t>(i)][static_cast<std::size_t>(o)];
    }
    m1 /= n_omega;
    m2 /= n_omega;
    double var1 = 0.0, var_d = 0.0;
    for (int i = 0; i < n_omega; ++i) {
      const double a = avg1[static_cast<std::size_t>(i)][static_cast<std::size_t>(o)];
      const double b = avg2[static_cast<std::size_t>(i)][static_cast<std::size_t>(o)];
      var1 += (a - m1) * (a - m1);
      const double d = (a - b) - (m1 - m2);
      var_d += d * d;
    }
    var1 /= std::max(1, n_omega - 1);
    var_d /= std::max(1, n_omega - 1);
    r.time_avg = m1;
    r.shifted_avg = m2;
    r.dispersion = std::sqrt(var1);
    r.diff_std_error = std::sqrt(var_d / n_omega);
    r.shift_invariant = std::abs(m1 - m2) <= 2.0 * r.diff_std_error + 1e-12;
    rep.observables.push_back(r);
  }
  return rep;
}

std::vector<std::pair<std::string, Observable>> default_observables() {
  std::vector<std::pair<std::string, Observable>> obs;
  obs.emplace_back("tanh_energy", [](const VelocityField& v) {
    const double e = inner(v, v);
    return std::tanh(e);
  });
  obs.emplace_back("tanh_strain", [](const VelocityField& v) {
    return std::tanh(norm2_sq(sym_gradient(v)));
  });
  obs.emplace_back("exp_neg_energy", [](const VelocityField& v) {
    return std::exp(-inner(v, v));
  });
  return obs;
}

}  // namespace tgf
