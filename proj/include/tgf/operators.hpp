#pragma once
// The nonlinear operators of the model in adjoint-consistent weak form.
//
// Convection is assembled as half the difference of the divergence-form
// transport operator and its exact discrete transpose, which makes
// (convection(u,v), v) vanish to rounding. The quadratic and cubic stress
// operators are Riesz representatives assembled through the exact adjoint of
// sym_gradient, so the duality identities
//    (cubic_stress(v), v)     = 1/2 * int |A(v)|^4
//    (quadratic_stress(v), w) = 1/2 * (A(v)^2, A(w))
// hold at quadrature level. Divergence-form stencils are kept only as an
// independent cross-check.
//
// The `_raw` variants skip the final Leray projection; their pairings against
// divergence-free fields equal the projected pairings, which the estimate
// routines exploit.

#include <cstdint>

#include "tgf/field.hpp"
#include "tgf/leray.hpp"
#include "tgf/params.hpp"

namespace tgf {

// Skew-symmetrized transport of `b` by `a` (unprojected).
VelocityField convection_raw(const VelocityField& a, const VelocityField& b);
// P applied on top of convection_raw.
VelocityField convection(const VelocityField& a, const VelocityField& b,
                         const LerayProjector& P);

// Direct quadrature of the trilinear form int (a . grad b) . c at cell
// centers; independent of the operator assembly above.
double trilinear_quadrature(const VelocityField& a, const VelocityField& b,
                            const VelocityField& c);

// 1/2 A*(A(v)^2): weak form of the quadratic stress divergence.
VelocityField quadratic_stress_raw(const VelocityField& v);
VelocityField quadratic_stress(const VelocityField& v, const LerayProjector& P);

// 1/2 A*(|A(v)|^2 A(v)): weak form of the cubic stress divergence.
VelocityField cubic_stress_raw(const VelocityField& v);
VelocityField cubic_stress(const VelocityField& v, const LerayProjector& P);

// Divergence-form route for cross-checking the weak assembly:
// -div(A(v)^2) and -div(|A(v)|^2 A(v)) as face stencils.
VelocityField quadratic_stress_divform(const VelocityField& v);
VelocityField cubic_stress_divform(const VelocityField& v);

// Full drift of the transformed system:
//   G(y) = nu A y + conv(y+z) + alpha quad(y+z) + beta cubic(y+z)
VelocityField transformed_drift_raw(const VelocityField& y, const VelocityField& z,
                                    const PhysParams& p);
VelocityField transformed_drift(const VelocityField& y, const VelocityField& z,
                                const PhysParams& p, const LerayProjector& P);

// Empirically calibrated constants used by the estimate harnesses.
struct OperatorConstants {
  double c_k = 1.0;        // Korn: ||grad w||_4 <= c_k ||A(w)||_4
  double c_s3 = 1.0;       // sup embedding: ||w||_inf <= c_s3 ||grad w||_4
  double lambda_hat = 1.0; // smallest discrete Stokes eigenvalue
  double c_ubd = 1.0;      // energy-inequality source constant
  double safety = 10.0;

  void validate() const;
};

struct MonotonicityGap {
  double lhs = 0.0;  // drift-difference pairing plus the calibrated damping term
  double rhs = 0.0;  // coercive lower bound
};
// Requires the parameter regime (eps0 in (0,1)); throws otherwise.
MonotonicityGap monotonicity_gap(const VelocityField& y1, const VelocityField& y2,
                                 const VelocityField& z, const PhysParams& p,
                                 const OperatorConstants& consts);

// Relative residual of the exact cubic-difference identity
//   beta <K(u)-K(v), u-v> = beta/4 int (|A(u)|^2-|A(v)|^2)^2
//                          + beta/4 int |A(u-v)|^2 (|A(u)|^2+|A(v)|^2)
// (the coefficients follow from <K(v), w> = 1/2 (|A(v)|^2 A(v), A(w))).
double k_identity_residual(const VelocityField& u, const VelocityField& v, double beta);

struct LipschitzProbe {
  double observed = 0.0;  // max |<G(u)-G(v), w>| over the test directions
  double bound = 0.0;     // bound assembled from the difference estimates
  double ratio = 0.0;
};
LipschitzProbe lipschitz_probe(const VelocityField& u, const VelocityField& v,
                               const VelocityField& z, const PhysParams& p,
                               const LerayProjector& P, int n_dirs, std::uint64_t seed);

// Random zero-boundary field (not projected); amplitudes ~ N(0, scale^2).
VelocityField random_field(const Grid& g, std::uint64_t seed, double scale = 1.0);
// Random divergence-free field (projected and renormalized to `norm`).
VelocityField random_solenoidal(const Grid& g, const LerayProjector& P,
                                std::uint64_t seed, double norm = 1.0);

}  // namespace tgf
