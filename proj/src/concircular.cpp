#include "sfgeo/concircular.hpp"

#include <cmath>

namespace sfgeo {

ConcircularField::ConcircularField(const SpaceForm& sf, Vec p0) : sf_(sf), p0_(std::move(p0)) {
  if (p0_.size() != sf.dim_ambient()) {
    throw std::invalid_argument("ConcircularField: p0 has the wrong dimension");
  }
  if (!p0_.allFinite()) {
    throw std::invalid_argument("ConcircularField: p0 must be finite");
  }
}

double ConcircularField::mu(const ManifoldPoint& p) const {
  return -sf_.C() * sf_.inner(p0_, p.coords());
}

Vec ConcircularField::value(const ManifoldPoint& p) const {
  return p0_ + mu(p) * p.coords();
}

FieldEval eval(const ConcircularField& field, const ManifoldPoint& p) {
  const double mu = field.mu(p);
  return {TangentVector(p, field.value(p)), mu};
}

namespace {

/// Central-difference covariant derivative of an ambient-valued field along
/// the geodesic through p with unit tangent x, projected tangentially at p.
Vec covariant_fd(const SpaceForm& sf, const std::function<Vec(const ManifoldPoint&)>& field,
                 const ManifoldPoint& p, const TangentVector& x, double h) {
  const ManifoldPoint qp = exp_map(sf, p, x, h);
  const ManifoldPoint qm = exp_map(sf, p, x, -h);
  const Vec dv = (field(qp) - field(qm)) / (2.0 * h);
  return tangent_project_raw(sf, p.coords(), dv);
}

}  // namespace

double concircularity_defect(const ConcircularField& field, const ManifoldPoint& p,
                             const TangentVector& x, double h) {
  const SpaceForm& sf = field.space_form();
  const Vec cov = covariant_fd(
      sf, [&](const ManifoldPoint& q) { return field.value(q); }, p, x, h);
  return coord_norm(cov - field.mu(p) * x.vector());
}

double concircularity_defect_generic(const SpaceForm& sf,
                                     const std::function<Vec(const ManifoldPoint&)>& field,
                                     const ManifoldPoint& p, const TangentVector& x, double h) {
  const Vec cov = covariant_fd(sf, field, p, x, h);
  const double xx = sf.inner(x.vector(), x.vector());
  const double mu_best = sf.inner(cov, x.vector()) / xx;
  return coord_norm(cov - mu_best * x.vector());
}

double grad_mu_defect(const ConcircularField& field, const ManifoldPoint& p, double h) {
  const SpaceForm& sf = field.space_form();
  const std::vector<Vec> basis = orthonormal_tangent_basis(sf, p);
  Vec grad = Vec::Zero(sf.dim_ambient());
  for (const Vec& b : basis) {
    const TangentVector dir(p, b);
    const double mp = field.mu(exp_map(sf, p, dir, h));
    const double mm = field.mu(exp_map(sf, p, dir, -h));
    grad += ((mp - mm) / (2.0 * h)) * b;
  }
  return coord_norm(grad + sf.C() * field.value(p));
}

std::vector<ConcircularField> basis_fields(const SpaceForm& sf) {
  std::vector<ConcircularField> fields;
  fields.reserve(sf.dim_ambient());
  for (int i = 0; i < sf.dim_ambient(); ++i) {
    Vec e = Vec::Zero(sf.dim_ambient());
    e[i] = 1.0;
    fields.emplace_back(sf, std::move(e));
  }
  return fields;
}

}  // namespace sfgeo
