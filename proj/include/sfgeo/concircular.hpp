#pragma once

#include "sfgeo/ambient.hpp"

#include <functional>
#include <vector>

namespace sfgeo {

/// A concircular vector field on M^n(C): the tangential part of a constant
/// ambient vector p0, V(p) = p0 + mu(p) p with concircular factor
/// mu(p) = -C <p0, p>.
class ConcircularField {
 public:
  ConcircularField(const SpaceForm& sf, Vec p0);

  const SpaceForm& space_form() const { return sf_; }
  const Vec& p0() const { return p0_; }

  double mu(const ManifoldPoint& p) const;
  Vec value(const ManifoldPoint& p) const;  // raw coordinates of V(p)

 private:
  SpaceForm sf_;
  Vec p0_;
};

struct FieldEval {
  TangentVector V;
  double mu;
};

FieldEval eval(const ConcircularField& field, const ManifoldPoint& p);

/// || nabla_x V - mu(p) x ||, the defining equation of a concircular field
/// probed in one unit tangent direction x. The covariant derivative is a
/// central difference of V along the geodesic exp_p(s x), projected
/// tangentially (Gauss formula).
double concircularity_defect(const ConcircularField& field, const ManifoldPoint& p,
                             const TangentVector& x, double h = kTransportStep);

/// Same probe for an arbitrary tangent field, with the factor replaced by the
/// best fit <nabla_x W, x>/<x,x>. Vanishes on concircular fields, stays large
/// on generic ones; used for negative controls.
double concircularity_defect_generic(const SpaceForm& sf,
                                     const std::function<Vec(const ManifoldPoint&)>& field,
                                     const ManifoldPoint& p, const TangentVector& x,
                                     double h = kTransportStep);

/// || grad mu + C V(p) ||, the gradient identity -C V = grad mu, with grad mu
/// estimated by central differences of mu along an orthonormal tangent basis.
double grad_mu_defect(const ConcircularField& field, const ManifoldPoint& p,
                      double h = kTransportStep);

/// The n+1 fields determined by p0 = e1, ..., e_{n+1}; a basis of the space
/// of concircular fields.
std::vector<ConcircularField> basis_fields(const SpaceForm& sf);

}  // namespace sfgeo
