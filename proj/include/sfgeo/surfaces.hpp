#pragma once

#include "sfgeo/ambient.hpp"
#include "sfgeo/concircular.hpp"
#include "sfgeo/curves.hpp"
#include "sfgeo/numerics.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace sfgeo {

/// Totally umbilical surface Q^2(c) = M^3(C) cut by the hyperplane
/// <p, p0_hat> = d. The unit normal within M is
///   eta2(p) = (p0_hat - C d p) / w,  w = sqrt(eps0 - C d^2),
/// oriented so A = <p0_hat, eta2> = w > 0. Its shape operator is m * Id with
/// the signed constant m = C d / w; k = |m| and c = C + k^2.
class UmbilicalSurface {
 public:
  const SpaceForm& space_form() const { return sf_; }
  const Vec& p0_hat() const { return p0_hat_; }
  double d() const { return d_; }
  int eps0() const { return eps0_; }
  double w() const { return w_; }        // = A
  double m() const { return m_; }        // signed umbilical constant
  double k() const { return k_measured_; }
  double c() const { return c_measured_; }

  Vec eta2_at(const ManifoldPoint& p) const;
  ManifoldPoint project_to_Q(const Vec& x) const;

  /// Deterministic chart of Q; (u, phi) are sphere angles when the slice is
  /// compact and (boost, angle) on the hyperbolic slices.
  ManifoldPoint point_at(double u, double phi) const;

  friend UmbilicalSurface make_umbilical(const SpaceForm& sf, const Vec& p0_hat, double d);

 private:
  UmbilicalSurface(const SpaceForm& sf, Vec p0_hat, double d);

  SpaceForm sf_;
  Vec p0_hat_;
  double d_;
  int eps0_;
  double w_;
  double m_;
  double k_measured_ = 0.0;
  double c_measured_ = 0.0;
  double r2_;                   // <y,y> of the slice, in the complement of p0_hat
  std::array<Vec, 3> basis_;    // orthonormal basis of the complement
  std::array<int, 3> signs_;    // causal type of each basis vector
};

/// Builds Q and certifies it numerically. Rejects lightlike p0_hat, empty or
/// degenerate slices, and slices that miss the model sheet; accepts every
/// configuration whose slice is a Riemannian surface.
UmbilicalSurface make_umbilical(const SpaceForm& sf, const Vec& p0_hat, double d);

struct UmbilicalInvariants {
  double k;                  // mean |eigenvalue| of the estimated shape operator
  double c;                  // from the Gauss relation c = C + k^2
  double umbilicity_defect;  // max deviation of the shape matrix from m * Id
};

/// Estimates the shape operator of Q by differencing eta2 along tangent
/// directions at the given sample points.
UmbilicalInvariants umbilical_invariants(const UmbilicalSurface& Q,
                                         const std::vector<ManifoldPoint>& samples,
                                         double h = kTransportStep);

/// Shape-operator umbilicity probe for an arbitrary immersed patch
/// (u,v) -> M^3(C); used as the negative control against genuinely
/// non-umbilical samples.
double patch_umbilicity_defect(const SpaceForm& sf,
                               const std::function<Vec(double, double)>& patch, double u, double v,
                               double h = 1e-4);

/// Arclength-sampled curve delta on Q with its adapted frame: T_delta tangent,
/// N_delta (= eta1) the in-Q normal, eta2 the normal of Q in M.
struct ProfileCurve {
  std::vector<double> t;
  std::vector<Vec> delta, T, N, eta2;
  std::vector<double> kappa;
  double q_drift = 0.0;  // max |<delta, p0_hat> - d| over the grid

  std::size_t size() const { return t.size(); }
  double step() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
};

struct ProfileFrame {
  Vec delta, T, N, eta2;
};

/// Deterministic adapted frame at the chart origin of Q.
ProfileFrame default_profile_frame(const UmbilicalSurface& Q);

/// Integrates the adapted frame system on Q:
///   delta' = T,  T' = -C delta + kappa_delta N + m eta2,
///   N' = -kappa_delta T,  eta2' = -m T,
/// re-orthonormalizing each step and certifying that delta stays on Q.
ProfileCurve integrate_profile(const UmbilicalSurface& Q,
                               const std::function<double(double)>& kappa_delta,
                               const ProfileFrame& init, double t_start, double t_end,
                               double step = kDefaultStep);

struct PatchEval {
  Vec point;
  Vec X_t;
  Vec X_z;
  Vec N;
};

/// The ruled surface Psi_a(t, z) = f(z/R) delta(t) + R g(z/R) W_a(t) with
/// W_a = cos(a) eta1 + sin(a) eta2 over a profile in Q. Off-grid profile
/// values come from coordinate-wise cubic splines re-projected onto M and
/// re-orthonormalized.
class ConcircularSurface {
 public:
  ConcircularSurface(UmbilicalSurface Q, ProfileCurve profile, double angle_a,
                     std::array<double, 2> z_range);

  const UmbilicalSurface& umbilical() const { return Q_; }
  const SpaceForm& space_form() const { return Q_.space_form(); }
  const ProfileCurve& profile() const { return profile_; }
  double angle_a() const { return angle_a_; }
  const std::array<double, 2>& z_range() const { return z_range_; }
  std::array<double, 2> t_range() const { return {profile_.t.front(), profile_.t.back()}; }

  ProfileFrame profile_at(double t) const;
  double kappa_delta(double t) const;

  /// Point, both partials (X_t by finite differences of the interpolant, X_z
  /// in closed form) and the unit normal N = -sin(a) eta1 + cos(a) eta2.
  PatchEval eval_patch(double t, double z) const;

  /// First-fundamental-form coefficient E = <X_t, X_t>; throws on degenerate
  /// rulings (E <= 0).
  double metric_E(double t, double z) const;

  /// The surface's axis: the concircular field determined by Q's p0_hat.
  ConcircularField axis() const;

 private:
  void check_range(double t, double z) const;

  UmbilicalSurface Q_;
  ProfileCurve profile_;
  double angle_a_;
  std::array<double, 2> z_range_;
  std::array<CubicSpline, 4> delta_sp_, T_sp_, N_sp_, eta2_sp_;
  CubicSpline kappa_sp_;
};

struct SurfaceConcircularity {
  double lambda_mean;  // mean of <N, p0_hat> over the lattice
  double deviation;    // max |<N, p0_hat> - mean|
  double A;            // <p0_hat, eta2>, the predicted lambda is A cos(a)
};

SurfaceConcircularity surface_concircularity_defect(const ConcircularSurface& S, int nt = 24,
                                                    int nz = 24);

struct VertexResult {
  bool present;
  double z0;
  double spread;
  std::optional<ManifoldPoint> vertex;
};

/// Solves f(z0/R) = m R g(z0/R) in the conical regime (cos a = 0) and
/// certifies that the ruling endpoints collapse to one point. For C < 0 with
/// |m| R <= 1 the equation has no solution and the result is absent.
VertexResult vertex_of(const ConcircularSurface& S, double vertex_tol = 1e-6);

/// Cone through a vertex: rulings exp_vertex(t v) over sampled unit tangent
/// directions v.
struct ConicalSurface {
  ManifoldPoint vertex;
  std::vector<Vec> profile_dirs;
  std::array<double, 2> t_range;

  ConicalSurface(ManifoldPoint vertex_, std::vector<Vec> dirs, std::array<double, 2> t_range_);

  std::vector<std::vector<ManifoldPoint>> rulings(int nt) const;
};

std::vector<std::vector<ManifoldPoint>> conical_patch(const SpaceForm& sf,
                                                      const ManifoldPoint& vertex,
                                                      const std::vector<Vec>& dirs,
                                                      const std::vector<double>& ts);

/// The ruled surface generated by a proper concircular helix:
///   X(s, z) = f(z/R) gamma(s) + R g(z/R) D(s),
/// with D the unit modified Darboux direction (rho T + B)/sqrt(1+rho^2).
class HelixRuledPatch {
 public:
  HelixRuledPatch(const FrenetCurve& helix, const ConcircularField& axis, double tol = 1e-4);

  const FrenetCurve& helix() const { return helix_; }
  const ConcircularField& axis() const { return axis_; }
  const std::vector<double>& rho() const { return rho_; }

  PatchEval eval(double s, double z) const;  // X_t slot carries X_s

  double section_gap() const { return section_gap_; }
  double normal_collinearity() const { return normal_collinearity_; }
  double axis_normal_deviation() const { return axis_normal_deviation_; }
  double lambda() const { return lambda_; }

 private:
  FrenetCurve helix_;
  ConcircularField axis_;
  std::vector<double> rho_;
  std::array<CubicSpline, 4> gamma_sp_, dir_sp_;
  double lambda_ = 0.0;
  double section_gap_ = 0.0;
  double normal_collinearity_ = 0.0;
  double axis_normal_deviation_ = 0.0;
};

HelixRuledPatch ruled_from_helix(const FrenetCurve& helix, const ConcircularField& axis,
                                 double tol = 1e-4);

/// The canonical-form decomposition of the helix-generated surface: the
/// umbilical Q through gamma(s_star) orthogonal to the axis, the profile
/// P = Q cut out of the ruled patch, and the constant strike angle a.
struct HelixSurfaceDecomposition {
  ConcircularSurface surface;
  double s_star;
  double s_lo, s_hi;            // helix window realized by the profile
  std::vector<double> s_window; // helix grid samples in the window
  std::vector<double> z_star;   // ruling parameter from gamma(s) to Q, per window sample
  std::vector<double> t_of_s;   // profile arclength hit by the ruling at s
  double angle_a;
  double angle_spread;          // certification of the constancy of a
};

HelixSurfaceDecomposition surface_from_helix(const FrenetCurve& helix,
                                             const ConcircularField& axis);

}  // namespace sfgeo
