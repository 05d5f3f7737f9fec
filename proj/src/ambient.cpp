#include "sfgeo/ambient.hpp"

#include <cmath>
#include <string>

namespace sfgeo {

Signature::Signature(int nu_, int dim_ambient_)
    : nu(nu_), epsilon(nu_ == 0 ? 1 : -1), dim_ambient(dim_ambient_) {
  if (nu != 0 && nu != 1) {
    throw std::invalid_argument("Signature: index nu must be 0 or 1");
  }
  if (dim_ambient < 3) {
    throw std::invalid_argument("Signature: ambient dimension must be >= 3");
  }
}

double inner(const Vec& u, const Vec& v, const Signature& sig) {
  if (u.size() != v.size() || u.size() != sig.dim_ambient) {
    throw std::invalid_argument("inner: dimension mismatch");
  }
  double s = sig.epsilon * u[0] * v[0];
  for (Eigen::Index i = 1; i < u.size(); ++i) {
    s += u[i] * v[i];
  }
  return s;
}

double coord_norm(const Vec& u) { return u.norm(); }

SpaceForm::SpaceForm(double C, int dim_ambient)
    : C_(C), R_(0.0), sig_(C > 0 ? 0 : 1, dim_ambient) {
  if (!(C != 0.0) || !std::isfinite(C)) {
    throw std::invalid_argument("SpaceForm: curvature C must be nonzero and finite");
  }
  R_ = 1.0 / std::sqrt(std::abs(C));
}

FG SpaceForm::fg(double x) const {
  if (C_ > 0) {
    return {std::cos(x), std::sin(x)};
  }
  return {std::cosh(x), std::sinh(x)};
}

FG fg(const SpaceForm& sf, double x) { return sf.fg(x); }

ManifoldPoint::ManifoldPoint(const SpaceForm& sf, Vec coords, double point_tol)
    : ManifoldPoint(sf, std::move(coords), true, point_tol) {}

ManifoldPoint::ManifoldPoint(const SpaceForm& sf, Vec coords, bool renormalize, double point_tol)
    : sf_(sf), p_(std::move(coords)) {
  if (p_.size() != sf.dim_ambient()) {
    throw std::invalid_argument("ManifoldPoint: dimension mismatch");
  }
  const double target = 1.0 / sf.C();
  double q = sf.inner(p_, p_);
  if (std::abs(q - target) > point_tol) {
    if (!renormalize || std::abs(q - target) > kSnapTol) {
      throw std::invalid_argument("ManifoldPoint: coordinates are off the quadric (|<p,p>-1/C| = " +
                                  std::to_string(std::abs(q - target)) + ")");
    }
    if (q * sf.C() <= 0.0) {
      throw std::invalid_argument("ManifoldPoint: wrong causal type, cannot renormalize");
    }
    p_ *= std::sqrt(target / q);
  }
  if (sf.signature().nu == 1 && p_[0] <= 0.0) {
    throw std::invalid_argument("ManifoldPoint: lower hyperboloid sheet rejected (x1 <= 0)");
  }
}

ManifoldPoint ManifoldPoint::project(const SpaceForm& sf, const Vec& x) {
  if (x.size() != sf.dim_ambient()) {
    throw std::invalid_argument("ManifoldPoint::project: dimension mismatch");
  }
  const double target = 1.0 / sf.C();
  const double q = inner(x, x, sf.signature());
  if (q * sf.C() <= 0.0) {
    throw std::invalid_argument("ManifoldPoint::project: wrong causal type");
  }
  Vec scaled = x * std::sqrt(target / q);
  return ManifoldPoint(sf, std::move(scaled), false, 1e-9);
}

TangentVector::TangentVector(ManifoldPoint base, Vec w, double tol)
    : base_(std::move(base)), w_(std::move(w)) {
  const SpaceForm& sf = base_.space_form();
  if (w_.size() != sf.dim_ambient()) {
    throw std::invalid_argument("TangentVector: dimension mismatch");
  }
  const double ip = sf.inner(w_, base_.coords());
  if (std::abs(ip) > tol) {
    if (std::abs(ip) > kSnapTol) {
      throw std::invalid_argument("TangentVector: not tangent at base (|<w,p>| = " +
                                  std::to_string(std::abs(ip)) + ")");
    }
    w_ -= sf.C() * ip * base_.coords();
  }
}

ManifoldPoint exp_map(const SpaceForm& sf, const ManifoldPoint& p, const TangentVector& w,
                      double t) {
  if (coord_norm(w.base().coords() - p.coords()) > kSnapTol) {
    throw std::invalid_argument("exp_map: tangent vector is not based at p");
  }
  const double unit = sf.inner(w.vector(), w.vector());
  if (std::abs(unit - 1.0) > kUnitTol) {
    throw std::invalid_argument("exp_map: direction must be a unit tangent vector (<w,w> = " +
                                std::to_string(unit) + ")");
  }
  const FG v = sf.fg(t / sf.R());
  Vec q = v.f * p.coords() + sf.R() * v.g * w.vector();
  return ManifoldPoint(sf, std::move(q));
}

TangentVector tangent_project(const SpaceForm& sf, const ManifoldPoint& p, const Vec& u) {
  return TangentVector(p, tangent_project_raw(sf, p.coords(), u));
}

Vec tangent_project_raw(const SpaceForm& sf, const Vec& p, const Vec& u) {
  return u - sf.C() * sf.inner(u, p) * p;
}

std::vector<Vec> orthonormal_tangent_basis(const SpaceForm& sf, const ManifoldPoint& p) {
  const int dim = sf.dim_ambient();
  std::vector<Vec> basis;
  basis.reserve(dim - 1);
  for (int i = 0; i < dim && static_cast<int>(basis.size()) < dim - 1; ++i) {
    Vec v = Vec::Zero(dim);
    v[i] = 1.0;
    v = tangent_project_raw(sf, p.coords(), v);
    for (const Vec& b : basis) {
      v -= sf.inner(v, b) * b;
    }
    const double n2 = sf.inner(v, v);  // positive definite on the tangent space
    if (n2 > 1e-12) {
      basis.push_back(v / std::sqrt(n2));
    }
  }
  if (static_cast<int>(basis.size()) != dim - 1) {
    throw std::runtime_error("orthonormal_tangent_basis: degenerate configuration");
  }
  return basis;
}

Vec cross_dual(const SpaceForm& sf, const Vec& u, const Vec& v, const Vec& w) {
  if (sf.dim_ambient() != 4) {
    throw std::invalid_argument("cross_dual: requires ambient dimension 4");
  }
  Eigen::Matrix4d M;
  M.col(0) = u;
  M.col(1) = v;
  M.col(2) = w;
  Vec d = Vec::Zero(4);
  for (int i = 0; i < 4; ++i) {
    M.col(3) = Eigen::Vector4d::Unit(i);
    d[i] = M.determinant();
  }
  d[0] *= sf.epsilon();  // lower the index: dual vector -> metric-orthogonal vector
  const double n2 = sf.inner(d, d);
  if (std::abs(n2) < 1e-18) {
    throw std::runtime_error("cross_dual: degenerate triple");
  }
  return d / std::sqrt(std::abs(n2));
}

}  // namespace sfgeo
