#pragma once

#include "sfgeo/ambient.hpp"
#include "sfgeo/concircular.hpp"
#include "sfgeo/numerics.hpp"

#include <functional>
#include <vector>

namespace sfgeo {

/// A point of M^3(C) with an adapted orthonormal frame: {T, N, B} unit and
/// pairwise orthogonal, all orthogonal to the position gamma.
struct FrenetState {
  Vec gamma, T, N, B;

  void validate(const SpaceForm& sf, double tol = kUnitTol) const;
};

/// Deterministic default frame: gamma = R e1, T = e2, N = e3, B = e4.
FrenetState default_frenet_state(const SpaceForm& sf);

/// Prescribed curvature/torsion with an initial frame.
struct CurveSpec {
  std::function<double(double)> kappa;
  std::function<double(double)> tau;
  double s_start = 0.0;
  double s_end = 1.0;
  FrenetState init;
};

/// Arclength-sampled curve with frames and sampled kappa, tau.
struct FrenetCurve {
  SpaceForm sf;
  std::vector<double> s;
  std::vector<Vec> gamma, T, N, B;
  std::vector<double> kappa, tau;

  std::size_t size() const { return s.size(); }
  double step() const { return s.size() > 1 ? s[1] - s[0] : 0.0; }
};

/// Integrates the Frenet-Serret system
///   gamma' = T,  T' = -C gamma + kappa N,  N' = -kappa T + tau B,
///   B' = -tau N,
/// re-orthonormalizing the frame against gamma after every step.
FrenetCurve integrate_frenet(const SpaceForm& sf, const CurveSpec& spec,
                             double step = kDefaultStep);

/// Recovers the Frenet apparatus from sampled points on a uniform arclength
/// grid: T = gamma', kappa N = T' + C gamma, B completes the frame (metric
/// dual), tau = <N', B>. Rejects non-unit-speed input and curvature below
/// kappa_floor.
FrenetCurve frenet_apparatus(const SpaceForm& sf, const std::vector<Vec>& points, double step,
                             double kappa_floor = 1e-6);

struct HelixMeasure {
  double lambda_mean;
  double deviation;  // max |lambda(s) - mean|
};

/// lambda(s) = <N(s), V(gamma(s))> along the curve; a concircular helix has
/// zero deviation.
HelixMeasure helix_defect(const FrenetCurve& curve, const ConcircularField& field);

/// V along the curve decomposed as a T + lambda N + b B, with mu sampled, and
/// the three structure-equation residuals
///   a' - lambda kappa - mu,   a kappa - b tau,   b' + lambda tau.
struct AxisDecomposition {
  std::vector<double> a, lambda, b, mu;
  std::vector<double> res_tangent, res_normal, res_binormal;

  double sup_residual() const;
};

AxisDecomposition decompose_axis(const FrenetCurve& curve, const ConcircularField& field);

/// Data of a constant-rectifying-slope helix: kappa = m mu, tau = rho kappa,
/// mu'' + C rho^2/(1+rho^2) mu = 0, lambda = -1/(m (1+rho^2)).
struct HelixCase1Spec {
  double rho;
  double m;
  double mu0;
  double dmu0;

  double lambda() const { return -1.0 / (m * (1.0 + rho * rho)); }
};

struct Case1Synthesis {
  CurveSpec spec;
  FrenetCurve curve;
  ConcircularField axis;
  std::vector<double> mu;  // closed-form factor on the grid
  double lambda;
  double s_end_used;
  bool truncated;
};

/// Solves the factor ODE in closed form, integrates the Frenet system with
/// kappa = m mu, tau = rho kappa, and reconstructs the axis from
/// v = b D + lambda N (D = rho T + B, b = -mu'/(C rho)), p0 = v - mu gamma.
/// The range is truncated to the maximal initial subinterval where
/// m mu > 1e-4.
Case1Synthesis synthesize_case1(const SpaceForm& sf, const HelixCase1Spec& hspec, double s_start,
                                double s_end, double step = kDefaultStep);

struct Case2Residuals {
  double r1;  // sup | mu'' + C mu + C lambda kappa |
  double r2;  // sup | (mu'/rho)' - C lambda tau |
};

/// The two scalar equations characterizing proper concircular helices,
/// evaluated by finite differences. Requires kappa > 0 and rho = tau/kappa
/// bounded away from zero on the grid.
Case2Residuals case2_residuals(const FrenetCurve& curve, double lambda,
                               const std::vector<double>& mu);

struct AxisReconstruction {
  ConcircularField field;
  double vlocal_defect;   // sup || Dv/ds - mu T ||
  double p0_deviation;    // sup || (v - mu gamma)(s) - (v - mu gamma)(s0) ||
};

/// Rebuilds the axis of a certified helix from (lambda, mu):
/// a = -mu'/C, b = a/rho, v = a T + lambda N + b B, p0 = v(s0) - mu(s0) gamma(s0).
/// Throws when the transport identity Dv/ds = mu T fails beyond tol.
AxisReconstruction reconstruct_axis(const FrenetCurve& curve, double lambda,
                                    const std::vector<double>& mu, double tol = 1e-4);

/// Axis-free helix detection: the structure equations are linear in
/// (b(s0), mu(s0), lambda), so the best candidate is the smallest singular
/// direction of the sampled residual operator.
struct HelixStructure {
  bool planar;        // torsion numerically zero
  double rho_range;   // max - min of tau/kappa (Case 1 <-> ~0)
  double residual;    // rms residual of the best unit-norm candidate
  double lambda;      // candidate lambda, normalized to sup |mu| = 1
  std::vector<double> mu;
};

HelixStructure estimate_helix_structure(const FrenetCurve& curve);

}  // namespace sfgeo
