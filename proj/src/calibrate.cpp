#include "tgf/calibrate.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "tgf/rng.hpp"

namespace tgf {

std::string CalibrationReport::to_json() const {
  nlohmann::json j;
  j["c_k"] = constants.c_k;
  j["c_s3"] = constants.c_s3;
  j["lambda_hat"] = constants.lambda_hat;
  j["c_ubd"] = constants.c_ubd;
  j["safety"] = constants.safety;
  j["poincare_min_ratio"] = poincare_min_ratio;
  j["korn_max_ratio"] = korn_max_ratio;
  j["sup_max_ratio"] = sup_max_ratio;
  j["ubd_max_ratio"] = ubd_max_ratio;
  j["n_samples"] = n_samples;
  j["seed"] = seed;
  j["grid"] = {{"Lx", grid_lx}, {"Ly", grid_ly}, {"nx", grid_nx}, {"ny", grid_ny}};
  return j.dump(2);
}

CalibrationReport calibrate(const Grid& g, const PhysParams& p, int n_samples,
                            std::uint64_t seed, double safety) {
  p.validate();
  LerayProjector P(g);

  CalibrationReport rep;
  rep.n_samples = n_samples;
  rep.seed = seed;
  rep.grid_lx = g.Lx;
  rep.grid_ly = g.Ly;
  rep.grid_nx = g.nx;
  rep.grid_ny = g.ny;

  // lambda_hat: dense solve where cheap, matrix-free on fine grids
  const int dim = (g.nx - 1) * (g.ny - 1);
  rep.constants.lambda_hat =
      (dim <= 1600) ? stokes_eigs(g, 1).eigenvalues[0] : smallest_stokes_eigenvalue(g);
  rep.constants.safety = safety;

  double korn = 0.0, sup = 0.0, poin = 1e300;
  for (int s = 0; s < n_samples; ++s) {
    VelocityField w = random_field(g, derive_seed(seed, static_cast<std::uint64_t>(s)));
    FieldNorms n = norms(w);
    TensorField a = sym_gradient(w);
    const double a4 = std::pow(quartic_norm4(a), 0.25);
    if (a4 > 0.0) korn = std::max(korn, n.gradL4 / a4);
    if (n.gradL4 > 0.0) sup = std::max(sup, sup_norm_centers(w) / n.gradL4);

    // discrete Poincare on solenoidal fields through the operator pairing
    VelocityField ws = P.project(w);
    const double e = inner(P.stokes_apply(ws), ws);
    const double l2 = inner(ws, ws);
    if (l2 > 0.0) poin = std::min(poin, e / (rep.constants.lambda_hat * l2));
  }
  rep.korn_max_ratio = korn;
  rep.sup_max_ratio = sup;
  rep.poincare_min_ratio = poin;
  rep.constants.c_k = korn;
  rep.constants.c_s3 = sup;

  // c_ubd: the constant for which the energy derivative obeys
  //   d/dt ||y||^2 <= -nu lam (1+eps0/2) ||y||^2 - (beta eps0/2) |A(y+z)|_4^4
  //                  + C (||z||^2 + ||z||_W14^4 + ||f||^2)
  const double eps0 = p.eps0();
  const double lam = rep.constants.lambda_hat;
  const double decay = p.nu * lam * (1.0 + 0.5 * eps0);
  const double f_norm_sq = p.has_forcing() ? inner(p.f, p.f) : 0.0;
  double ubd = 1.0;
  const double amps[] = {0.05, 0.3, 1.0, 3.0};
  const int n_ubd = std::max(50, n_samples / 8);
  for (int s = 0; s < n_ubd; ++s) {
    const std::uint64_t sd = derive_seed(seed ^ 0x5eedULL, static_cast<std::uint64_t>(s));
    const double ay = amps[s % 4], az = amps[(s / 4) % 4];
    VelocityField y = random_solenoidal(g, P, sd, ay);
    VelocityField z = random_solenoidal(g, P, derive_seed(sd, 1), az);
    VelocityField drift = transformed_drift_raw(y, z, p);
    double r = -2.0 * inner(drift, y) + 2.0 * p.chi * inner(z, y);
    if (p.has_forcing()) r += 2.0 * inner(p.f, y);
    TensorField avz = sym_gradient(y + z);
    const double numer =
        r + decay * inner(y, y) + 0.5 * p.beta * eps0 * quartic_norm4(avz);
    FieldNorms nz = norms(z);
    const double denom = inner(z, z) + std::pow(nz.W14, 4) + f_norm_sq;
    if (denom > 1e-14) ubd = std::max(ubd, numer / denom);
  }
  rep.ubd_max_ratio = ubd;
  rep.constants.c_ubd = safety * ubd;
  return rep;
}

}  // namespace tgf
