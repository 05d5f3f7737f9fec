#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace sfgeo {

using Vec = Eigen::VectorXd;

// Shared default tolerances.
inline constexpr double kPointTol = 1e-10;      // quadric membership
inline constexpr double kSnapTol = 1e-6;        // constructors renormalize within this
inline constexpr double kUnitTol = 1e-8;        // unit / orthogonality checks
inline constexpr double kDefaultStep = 1e-3;    // arclength integration step
inline constexpr double kTransportStep = 1e-4;  // h for covariant finite differences

/// Metric signature of the flat ambient space R^{n+1}_nu:
/// <u,v> = eps*u1*v1 + u2*v2 + ... with eps = (-1)^nu, nu in {0,1}.
struct Signature {
  int nu;
  int epsilon;
  int dim_ambient;

  Signature(int nu_, int dim_ambient_);
};

/// The indefinite inner product of the ambient space.
double inner(const Vec& u, const Vec& v, const Signature& sig);

/// Euclidean norm of raw coordinates. Used for defect magnitudes, where the
/// indefinite metric could hide a nonzero difference vector.
double coord_norm(const Vec& u);

struct FG {
  double f;
  double g;
};

/// The space form M^n(C): the quadric <p,p> = 1/C in R^{n+1}_nu.
/// C > 0 gives the round sphere (nu = 0); C < 0 the upper hyperboloid
/// sheet x1 > 0 (nu = 1). Construction pins R = 1/sqrt(|C|), so C*R^2 = eps.
class SpaceForm {
 public:
  explicit SpaceForm(double C, int dim_ambient = 4);

  double C() const { return C_; }
  double R() const { return R_; }
  const Signature& signature() const { return sig_; }
  int dim_ambient() const { return sig_.dim_ambient; }
  int epsilon() const { return sig_.epsilon; }

  double inner(const Vec& u, const Vec& v) const { return sfgeo::inner(u, v, sig_); }

  /// (cos x, sin x) for C > 0, (cosh x, sinh x) for C < 0.
  /// Satisfies f^2 + eps*g^2 = 1, f' = -eps*g, g' = f.
  FG fg(double x) const;

 private:
  double C_;
  double R_;
  Signature sig_;
};

FG fg(const SpaceForm& sf, double x);

/// A point of M^n(C). The constructor renormalizes coordinates onto the
/// quadric when they are within kSnapTol of it and rejects anything farther
/// off, anything of the wrong causal type, and lower-sheet points when nu = 1.
class ManifoldPoint {
 public:
  ManifoldPoint(const SpaceForm& sf, Vec coords, double point_tol = kPointTol);

  const Vec& coords() const { return p_; }
  const SpaceForm& space_form() const { return sf_; }

  /// Rescale an arbitrary off-quadric vector onto the manifold. Wider basin
  /// than the constructor; still rejects causal mismatches and the lower sheet.
  static ManifoldPoint project(const SpaceForm& sf, const Vec& x);

 private:
  ManifoldPoint(const SpaceForm& sf, Vec coords, bool renormalize, double point_tol);

  SpaceForm sf_;
  Vec p_;
};

/// A tangent vector w at base.p: <w, p> = 0. Near-tangent inputs (within
/// kSnapTol) are projected, like point renormalization.
class TangentVector {
 public:
  TangentVector(ManifoldPoint base, Vec w, double tol = kPointTol);

  const ManifoldPoint& base() const { return base_; }
  const Vec& vector() const { return w_; }

 private:
  ManifoldPoint base_;
  Vec w_;
};

/// exp_p(t w) = f(t/R) p + R g(t/R) w for unit tangent w.
ManifoldPoint exp_map(const SpaceForm& sf, const ManifoldPoint& p, const TangentVector& w,
                      double t);

/// Tangential part of an ambient vector at p: u - C <u,p> p. Idempotent.
TangentVector tangent_project(const SpaceForm& sf, const ManifoldPoint& p, const Vec& u);

/// Raw-coordinate version of tangent_project, for inner loops.
Vec tangent_project_raw(const SpaceForm& sf, const Vec& p, const Vec& u);

/// Deterministic orthonormal basis of T_p M (n vectors, positive definite
/// induced metric).
std::vector<Vec> orthonormal_tangent_basis(const SpaceForm& sf, const ManifoldPoint& p);

/// Metric dual of u ^ v ^ w in dimension 4, normalized to unit signature
/// norm. Orthogonal to all three arguments; the orientation is fixed so that
/// cross_dual(R e1, e2, e3) = +e4 in both signatures.
Vec cross_dual(const SpaceForm& sf, const Vec& u, const Vec& v, const Vec& w);

}  // namespace sfgeo
