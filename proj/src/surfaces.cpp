#include "sfgeo/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sfgeo {

namespace {

constexpr double kRangePad = 5e-3;  // allowed interpolation overshoot at range ends

/// Component of x along a unit-or-timelike-unit vector b with <b,b> = sign.
Vec project_along(const SpaceForm& sf, const Vec& x, const Vec& b, int sign) {
  return static_cast<double>(sign) * sf.inner(x, b) * b;
}

std::array<Vec, 2> tangent_basis_on_Q(const UmbilicalSurface& Q, const ManifoldPoint& p,
                                      const Vec& eta) {
  const SpaceForm& sf = Q.space_form();
  std::array<Vec, 2> basis = {Vec(), Vec()};
  std::size_t found = 0;
  for (int i = 0; i < 4 && found < 2; ++i) {
    Vec v = tangent_project_raw(sf, p.coords(), Vec::Unit(4, i));
    v -= sf.inner(v, eta) * eta;
    for (std::size_t j = 0; j < found; ++j) {
      v -= sf.inner(v, basis[j]) * basis[j];
    }
    const double n2 = sf.inner(v, v);  // positive: Q is Riemannian
    if (n2 > 1e-10) {
      basis[found++] = v / std::sqrt(n2);
    }
  }
  if (found != 2) {
    throw std::runtime_error("tangent basis on Q: degenerate configuration");
  }
  return basis;
}

}  // namespace

UmbilicalSurface::UmbilicalSurface(const SpaceForm& sf, Vec p0_hat, double d)
    : sf_(sf), p0_hat_(std::move(p0_hat)), d_(d) {
  if (sf.dim_ambient() != 4) {
    throw std::invalid_argument("UmbilicalSurface: ambient dimension must be 4");
  }
  const double q0 = sf.inner(p0_hat_, p0_hat_);
  if (std::abs(q0) < 1e-10) {
    throw std::invalid_argument("UmbilicalSurface: lightlike defining vector rejected");
  }
  p0_hat_ /= std::sqrt(std::abs(q0));
  eps0_ = q0 > 0 ? 1 : -1;

  const double w2 = eps0_ - sf.C() * d_ * d_;
  if (w2 < 1e-10) {
    throw std::invalid_argument(
        "UmbilicalSurface: empty or degenerate intersection (eps0 - C d^2 <= 0)");
  }
  w_ = std::sqrt(w2);
  m_ = sf.C() * d_ / w_;
  r2_ = 1.0 / sf.C() - d_ * d_ / eps0_;

  // Orthonormal basis of the metric complement of p0_hat, timelike vector
  // first when the complement is Lorentzian.
  std::size_t found = 0;
  for (int i = 0; i < 4 && found < 3; ++i) {
    Vec v = Vec::Unit(4, i);
    v -= project_along(sf, v, p0_hat_, eps0_);
    for (std::size_t j = 0; j < found; ++j) {
      v -= project_along(sf, v, basis_[j], signs_[j]);
    }
    const double n2 = sf.inner(v, v);
    if (std::abs(n2) > 1e-10) {
      basis_[found] = v / std::sqrt(std::abs(n2));
      signs_[found] = n2 > 0 ? 1 : -1;
      ++found;
    }
  }
  if (found != 3) {
    throw std::runtime_error("UmbilicalSurface: failed to build a complement basis");
  }
  for (std::size_t i = 1; i < 3; ++i) {
    if (signs_[i] < 0) {
      std::swap(basis_[0], basis_[i]);
      std::swap(signs_[0], signs_[i]);
    }
  }

  if (r2_ < 0.0) {
    // Two-sheeted slice; orient the timelike basis vector toward the model sheet.
    if (signs_[0] != -1) {
      throw std::runtime_error("UmbilicalSurface: inconsistent slice signature");
    }
    const Vec probe = (d_ / eps0_) * p0_hat_ + std::sqrt(-r2_) * basis_[0];
    if (probe[0] < 0.0) {
      basis_[0] = -basis_[0];
    }
  }
  // The chart origin must land on the model; rejects slices confined to the
  // lower hyperboloid sheet.
  point_at(0.0, 0.0);
}

Vec UmbilicalSurface::eta2_at(const ManifoldPoint& p) const {
  return (p0_hat_ - sf_.C() * d_ * p.coords()) / w_;
}

ManifoldPoint UmbilicalSurface::project_to_Q(const Vec& x) const {
  const double beta = sf_.inner(x, p0_hat_) / eps0_;
  Vec y = x - beta * p0_hat_;
  const double qy = sf_.inner(y, y);
  if (qy * r2_ <= 0.0) {
    throw std::runtime_error("project_to_Q: point cannot be projected onto the slice");
  }
  y *= std::sqrt(r2_ / qy);
  return ManifoldPoint(sf_, (d_ / eps0_) * p0_hat_ + y);
}

ManifoldPoint UmbilicalSurface::point_at(double u, double phi) const {
  const Vec center = (d_ / eps0_) * p0_hat_;
  Vec y;
  if (r2_ > 0.0) {
    y = std::sqrt(r2_) * (std::cos(u) * std::cos(phi) * basis_[0] +
                          std::cos(u) * std::sin(phi) * basis_[1] + std::sin(u) * basis_[2]);
  } else {
    y = std::sqrt(-r2_) *
        (std::cosh(u) * basis_[0] +
         std::sinh(u) * (std::cos(phi) * basis_[1] + std::sin(phi) * basis_[2]));
  }
  return ManifoldPoint(sf_, center + y);
}

UmbilicalSurface make_umbilical(const SpaceForm& sf, const Vec& p0_hat, double d) {
  UmbilicalSurface Q(sf, p0_hat, d);
  std::vector<ManifoldPoint> samples;
  for (double u : {-0.6, -0.2, 0.3, 0.7}) {
    for (double phi : {0.4, 2.3}) {
      samples.push_back(Q.point_at(u, phi));
    }
  }
  const UmbilicalInvariants inv = umbilical_invariants(Q, samples);
  if (std::abs(inv.k - std::abs(Q.m_)) > 1e-3 || inv.umbilicity_defect > 1e-3) {
    throw std::runtime_error("make_umbilical: numerical certification failed (k = " +
                             std::to_string(inv.k) + ", defect = " +
                             std::to_string(inv.umbilicity_defect) + ")");
  }
  Q.k_measured_ = inv.k;
  Q.c_measured_ = inv.c;
  return Q;
}

UmbilicalInvariants umbilical_invariants(const UmbilicalSurface& Q,
                                         const std::vector<ManifoldPoint>& samples, double h) {
  if (samples.empty()) {
    throw std::invalid_argument("umbilical_invariants: need sample points");
  }
  const SpaceForm& sf = Q.space_form();
  double k_acc = 0.0;
  double defect = 0.0;
  for (const ManifoldPoint& p : samples) {
    const Vec eta = Q.eta2_at(p);
    const std::array<Vec, 2> basis = tangent_basis_on_Q(Q, p, eta);
    Eigen::Matrix2d S;
    for (int j = 0; j < 2; ++j) {
      const TangentVector dir(p, basis[j]);
      const ManifoldPoint qp = Q.project_to_Q(exp_map(sf, p, dir, h).coords());
      const ManifoldPoint qm = Q.project_to_Q(exp_map(sf, p, dir, -h).coords());
      const Vec d_eta = (Q.eta2_at(qp) - Q.eta2_at(qm)) / (2.0 * h);
      Vec a = tangent_project_raw(sf, p.coords(), d_eta);
      a -= sf.inner(a, eta) * eta;
      a = -a;  // shape operator A X = -nabla_X eta2
      for (int i = 0; i < 2; ++i) {
        S(i, j) = sf.inner(a, basis[i]);
      }
    }
    const double mean = 0.5 * (S(0, 0) + S(1, 1));
    k_acc += std::abs(mean);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double target = i == j ? mean : 0.0;
        defect = std::max(defect, std::abs(S(i, j) - target));
      }
    }
  }
  const double k = k_acc / static_cast<double>(samples.size());
  return {k, sf.C() + k * k, defect};
}

double patch_umbilicity_defect(const SpaceForm& sf,
                               const std::function<Vec(double, double)>& patch, double u, double v,
                               double h) {
  const Vec fc = patch(u, v);
  const Vec fup = patch(u + h, v), fum = patch(u - h, v);
  const Vec fvp = patch(u, v + h), fvm = patch(u, v - h);
  const Vec x_u = (fup - fum) / (2.0 * h);
  const Vec x_v = (fvp - fvm) / (2.0 * h);
  const Vec n = cross_dual(sf, fc, x_u, x_v);

  const Vec f_uu = (fup - 2.0 * fc + fum) / (h * h);
  const Vec f_vv = (fvp - 2.0 * fc + fvm) / (h * h);
  const Vec f_uv = (patch(u + h, v + h) - patch(u + h, v - h) - patch(u - h, v + h) +
                    patch(u - h, v - h)) /
                   (4.0 * h * h);

  Eigen::Matrix2d I, II;
  I << sf.inner(x_u, x_u), sf.inner(x_u, x_v), sf.inner(x_u, x_v), sf.inner(x_v, x_v);
  II << sf.inner(f_uu, n), sf.inner(f_uv, n), sf.inner(f_uv, n), sf.inner(f_vv, n);
  const Eigen::Matrix2d W = I.inverse() * II;
  const double mean = 0.5 * (W(0, 0) + W(1, 1));
  double defect = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      defect = std::max(defect, std::abs(W(i, j) - (i == j ? mean : 0.0)));
    }
  }
  return defect;
}

ProfileFrame default_profile_frame(const UmbilicalSurface& Q) {
  const ManifoldPoint p = Q.point_at(0.0, 0.0);
  const Vec eta = Q.eta2_at(p);
  const std::array<Vec, 2> basis = tangent_basis_on_Q(Q, p, eta);
  ProfileFrame fr;
  fr.delta = p.coords();
  fr.T = basis[0];
  fr.N = cross_dual(Q.space_form(), p.coords(), basis[0], eta);
  fr.eta2 = eta;
  return fr;
}

ProfileCurve integrate_profile(const UmbilicalSurface& Q,
                               const std::function<double(double)>& kappa_delta,
                               const ProfileFrame& init, double t_start, double t_end,
                               double step) {
  const SpaceForm& sf = Q.space_form();
  const double C = sf.C();
  const double m = Q.m();

  {  // the initial frame must be adapted to Q
    const ManifoldPoint p(sf, init.delta, kSnapTol);
    if (std::abs(sf.inner(init.delta, Q.p0_hat()) - Q.d()) > 1e-6) {
      throw std::invalid_argument("integrate_profile: initial point is not on Q");
    }
    if (coord_norm(init.eta2 - Q.eta2_at(p)) > 1e-5) {
      throw std::invalid_argument("integrate_profile: initial frame is not adapted (eta2)");
    }
    for (const Vec* v : {&init.T, &init.N}) {
      if (std::abs(sf.inner(*v, Q.p0_hat())) > 1e-5) {
        throw std::invalid_argument("integrate_profile: initial frame is not tangent to Q");
      }
    }
  }

  Vec y0(16);
  y0.segment(0, 4) = init.delta;
  y0.segment(4, 4) = init.T;
  y0.segment(8, 4) = init.N;
  y0.segment(12, 4) = init.eta2;

  auto orthonormalize = [&](Vec& y) {
    Vec delta = y.segment(0, 4);
    std::array<Vec, 3> frame = {y.segment(4, 4), y.segment(8, 4), y.segment(12, 4)};
    for (std::size_t i = 0; i < frame.size(); ++i) {
      Vec& v = frame[i];
      v -= C * sf.inner(v, delta) * delta;
      for (std::size_t j = 0; j < i; ++j) {
        v -= sf.inner(v, frame[j]) * frame[j];
      }
      const double n2 = sf.inner(v, v);
      if (n2 < 1e-12) {
        throw std::runtime_error("integrate_profile: frame degeneracy");
      }
      v /= std::sqrt(n2);
    }
    y.segment(4, 4) = frame[0];
    y.segment(8, 4) = frame[1];
    y.segment(12, 4) = frame[2];
  };

  OdeProblem problem;
  problem.state_dim = 16;
  problem.s_start = t_start;
  problem.s_end = t_end;
  problem.step = step;
  problem.y0 = y0;
  problem.rhs = [&](double t, const Vec& y) {
    const double kd = kappa_delta(t);
    Vec dy(16);
    dy.segment(0, 4) = y.segment(4, 4);
    dy.segment(4, 4) = -C * y.segment(0, 4) + kd * y.segment(8, 4) + m * y.segment(12, 4);
    dy.segment(8, 4) = -kd * y.segment(4, 4);
    dy.segment(12, 4) = -m * y.segment(4, 4);
    return dy;
  };

  const Trajectory traj = integrate(problem, [&](double, Vec& y) { orthonormalize(y); });

  ProfileCurve out;
  out.t = traj.s;
  out.delta.reserve(traj.size());
  out.T.reserve(traj.size());
  out.N.reserve(traj.size());
  out.eta2.reserve(traj.size());
  out.kappa.resize(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vec& y = traj.states[i];
    out.delta.push_back(y.segment(0, 4));
    out.T.push_back(y.segment(4, 4));
    out.N.push_back(y.segment(8, 4));
    out.eta2.push_back(y.segment(12, 4));
    out.kappa[i] = kappa_delta(traj.s[i]);
    out.q_drift = std::max(out.q_drift, std::abs(sf.inner(out.delta.back(), Q.p0_hat()) - Q.d()));
  }
  if (out.q_drift > 1e-6) {
    throw std::runtime_error("integrate_profile: drift off Q beyond tolerance (" +
                             std::to_string(out.q_drift) + ")");
  }
  return out;
}

namespace {

std::array<CubicSpline, 4> column_splines(const std::vector<double>& t,
                                          const std::vector<Vec>& col) {
  std::array<CubicSpline, 4> sp;
  std::vector<double> y(t.size());
  for (int c = 0; c < 4; ++c) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      y[i] = col[i][c];
    }
    sp[c] = CubicSpline(t, y);
  }
  return sp;
}

Vec eval_columns(const std::array<CubicSpline, 4>& sp, double t) {
  Vec v(4);
  for (int c = 0; c < 4; ++c) {
    v[c] = sp[c].eval(t);
  }
  return v;
}

}  // namespace

ConcircularSurface::ConcircularSurface(UmbilicalSurface Q, ProfileCurve profile, double angle_a,
                                       std::array<double, 2> z_range)
    : Q_(std::move(Q)), profile_(std::move(profile)), angle_a_(angle_a), z_range_(z_range) {
  if (profile_.size() < 5) {
    throw std::invalid_argument("ConcircularSurface: profile needs at least 5 samples");
  }
  if (!(z_range_[1] > z_range_[0])) {
    throw std::invalid_argument("ConcircularSurface: empty z range");
  }
  delta_sp_ = column_splines(profile_.t, profile_.delta);
  T_sp_ = column_splines(profile_.t, profile_.T);
  N_sp_ = column_splines(profile_.t, profile_.N);
  eta2_sp_ = column_splines(profile_.t, profile_.eta2);
  kappa_sp_ = CubicSpline(profile_.t, profile_.kappa);
}

void ConcircularSurface::check_range(double t, double z) const {
  if (t < profile_.t.front() - kRangePad || t > profile_.t.back() + kRangePad) {
    throw std::out_of_range("eval_patch: profile parameter t out of range");
  }
  if (z < z_range_[0] - kRangePad || z > z_range_[1] + kRangePad) {
    throw std::out_of_range("eval_patch: ruling parameter z out of range");
  }
}

ProfileFrame ConcircularSurface::profile_at(double t) const {
  check_range(t, z_range_[0]);
  const SpaceForm& sf = Q_.space_form();
  ProfileFrame fr;
  fr.delta = ManifoldPoint::project(sf, eval_columns(delta_sp_, t)).coords();
  const double C = sf.C();
  auto orth = [&](Vec v, const Vec* against1, const Vec* against2) {
    v -= C * sf.inner(v, fr.delta) * fr.delta;
    if (against1 != nullptr) {
      v -= sf.inner(v, *against1) * *against1;
    }
    if (against2 != nullptr) {
      v -= sf.inner(v, *against2) * *against2;
    }
    const double n2 = sf.inner(v, v);
    if (n2 < 1e-12) {
      throw std::runtime_error("profile interpolation: degenerate frame");
    }
    return Vec(v / std::sqrt(n2));
  };
  fr.T = orth(eval_columns(T_sp_, t), nullptr, nullptr);
  fr.N = orth(eval_columns(N_sp_, t), &fr.T, nullptr);
  fr.eta2 = orth(eval_columns(eta2_sp_, t), &fr.T, &fr.N);
  return fr;
}

double ConcircularSurface::kappa_delta(double t) const { return kappa_sp_.eval(t); }

PatchEval ConcircularSurface::eval_patch(double t, double z) const {
  check_range(t, z);
  const SpaceForm& sf = Q_.space_form();
  const double R = sf.R();
  const double eps = sf.epsilon();
  const FG v = sf.fg(z / R);
  const double ca = std::cos(angle_a_), sa = std::sin(angle_a_);

  auto point_at = [&](double tt) {
    const ProfileFrame fr = profile_at(tt);
    const Vec W = ca * fr.N + sa * fr.eta2;
    return Vec(v.f * fr.delta + R * v.g * W);
  };

  const ProfileFrame fr = profile_at(t);
  const Vec W = ca * fr.N + sa * fr.eta2;
  PatchEval out;
  out.point = v.f * fr.delta + R * v.g * W;
  out.X_z = -(eps / R) * v.g * fr.delta + v.f * W;
  const double h = kTransportStep;
  out.X_t = (point_at(t + h) - point_at(t - h)) / (2.0 * h);
  out.N = -sa * fr.N + ca * fr.eta2;
  return out;
}

double ConcircularSurface::metric_E(double t, double z) const {
  const PatchEval pe = eval_patch(t, z);
  const double E = space_form().inner(pe.X_t, pe.X_t);
  if (!(E > 1e-12)) {
    throw std::domain_error("metric_E: degenerate ruling (E <= 0 at t = " + std::to_string(t) +
                            ", z = " + std::to_string(z) + ")");
  }
  return E;
}

ConcircularField ConcircularSurface::axis() const {
  return ConcircularField(space_form(), Q_.p0_hat());
}

SurfaceConcircularity surface_concircularity_defect(const ConcircularSurface& S, int nt, int nz) {
  const auto& tr = S.profile().t;
  const auto& zr = S.z_range();
  const SpaceForm& sf = S.space_form();
  std::vector<double> lambdas;
  lambdas.reserve(static_cast<std::size_t>(nt) * nz);
  for (int i = 0; i < nt; ++i) {
    const double t = tr.front() + (tr.back() - tr.front()) * i / (nt - 1.0);
    for (int j = 0; j < nz; ++j) {
      const double z = zr[0] + (zr[1] - zr[0]) * j / (nz - 1.0);
      const PatchEval pe = S.eval_patch(t, z);
      lambdas.push_back(sf.inner(pe.N, S.umbilical().p0_hat()));
    }
  }
  double mean = 0.0;
  for (double l : lambdas) {
    mean += l;
  }
  mean /= static_cast<double>(lambdas.size());
  double dev = 0.0;
  for (double l : lambdas) {
    dev = std::max(dev, std::abs(l - mean));
  }
  return {mean, dev, S.umbilical().w()};
}

VertexResult vertex_of(const ConcircularSurface& S, double vertex_tol) {
  const double sa = std::sin(S.angle_a());
  if (std::abs(std::cos(S.angle_a())) > 1e-8) {
    throw std::invalid_argument("vertex_of: surface is not in the conical regime (cos a != 0)");
  }
  const SpaceForm& sf = S.space_form();
  const double R = sf.R();
  const double me = sa * S.umbilical().m();  // ruling direction is sin(a) eta2
  double zeta = 0.0;
  if (sf.C() > 0) {
    zeta = std::atan2(1.0, me * R);
  } else {
    if (std::abs(me) * R <= 1.0 + 1e-12) {
      return {false, 0.0, 0.0, std::nullopt};
    }
    zeta = std::atanh(1.0 / (me * R));
  }
  const double z0 = R * zeta;

  // Evaluate phi(t) = Psi(t, z0) directly; z0 may exceed the stored z range.
  const FG v = sf.fg(zeta);
  Vec mean = Vec::Zero(4);
  std::vector<Vec> pts;
  pts.reserve(S.profile().size());
  for (double t : S.profile().t) {
    const ProfileFrame fr = S.profile_at(t);
    const Vec W = std::cos(S.angle_a()) * fr.N + sa * fr.eta2;
    pts.push_back(v.f * fr.delta + R * v.g * W);
    mean += pts.back();
  }
  mean /= static_cast<double>(pts.size());
  double spread = 0.0;
  for (const Vec& p : pts) {
    spread = std::max(spread, coord_norm(p - mean));
  }
  if (spread > vertex_tol) {
    throw std::runtime_error("vertex_of: rulings do not focus (spread = " +
                             std::to_string(spread) + ")");
  }
  return {true, z0, spread, ManifoldPoint::project(sf, mean)};
}

ConicalSurface::ConicalSurface(ManifoldPoint vertex_, std::vector<Vec> dirs,
                               std::array<double, 2> t_range_)
    : vertex(std::move(vertex_)), profile_dirs(std::move(dirs)), t_range(t_range_) {
  const SpaceForm& sf = vertex.space_form();
  for (const Vec& v : profile_dirs) {
    if (std::abs(sf.inner(v, v) - 1.0) > kUnitTol ||
        std::abs(sf.inner(v, vertex.coords())) > kSnapTol) {
      throw std::invalid_argument("ConicalSurface: directions must be unit tangents at the vertex");
    }
  }
  if (!(t_range[1] > t_range[0])) {
    throw std::invalid_argument("ConicalSurface: empty parameter range");
  }
}

std::vector<std::vector<ManifoldPoint>> ConicalSurface::rulings(int nt) const {
  if (nt < 2) {
    throw std::invalid_argument("ConicalSurface::rulings: need at least 2 samples");
  }
  std::vector<double> ts(nt);
  for (int i = 0; i < nt; ++i) {
    ts[i] = t_range[0] + (t_range[1] - t_range[0]) * i / (nt - 1.0);
  }
  return conical_patch(vertex.space_form(), vertex, profile_dirs, ts);
}

std::vector<std::vector<ManifoldPoint>> conical_patch(const SpaceForm& sf,
                                                      const ManifoldPoint& vertex,
                                                      const std::vector<Vec>& dirs,
                                                      const std::vector<double>& ts) {
  std::vector<std::vector<ManifoldPoint>> out;
  out.reserve(dirs.size());
  for (const Vec& v : dirs) {
    const TangentVector dir(vertex, v);
    if (std::abs(sf.inner(v, v) - 1.0) > kUnitTol) {
      throw std::invalid_argument("conical_patch: directions must be unit tangent vectors");
    }
    std::vector<ManifoldPoint> ruling;
    ruling.reserve(ts.size());
    for (double t : ts) {
      ruling.push_back(exp_map(sf, vertex, dir, t));
    }
    out.push_back(std::move(ruling));
  }
  return out;
}

HelixRuledPatch::HelixRuledPatch(const FrenetCurve& helix, const ConcircularField& axis,
                                 double tol)
    : helix_(helix), axis_(axis) {
  const std::size_t n = helix_.size();
  if (n < 5) {
    throw std::invalid_argument("HelixRuledPatch: helix too short");
  }
  const SpaceForm& sf = helix_.sf;

  rho_.resize(n);
  double rho_sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(helix_.kappa[i] > 1e-6)) {
      throw std::invalid_argument("HelixRuledPatch: kappa vanishes on the grid");
    }
    rho_[i] = helix_.tau[i] / helix_.kappa[i];
    rho_sup = std::max(rho_sup, std::abs(rho_[i]));
  }
  if (rho_sup < 1e-6) {
    throw std::invalid_argument("HelixRuledPatch: planar curve rejected (not proper)");
  }

  const AxisDecomposition dec = decompose_axis(helix_, axis_);
  if (dec.sup_residual() > tol) {
    throw std::invalid_argument(
        "HelixRuledPatch: input fails helix certification (structure residual = " +
        std::to_string(dec.sup_residual()) + ")");
  }
  double lambda_mean = 0.0;
  for (double l : dec.lambda) {
    lambda_mean += l;
  }
  lambda_mean /= static_cast<double>(n);
  for (double l : dec.lambda) {
    if (std::abs(l - lambda_mean) > tol) {
      throw std::invalid_argument("HelixRuledPatch: <N,V> is not constant along the curve");
    }
  }
  if (std::abs(lambda_mean) < 1e-6) {
    throw std::invalid_argument("HelixRuledPatch: lambda = 0, curve is not a proper helix");
  }
  lambda_ = lambda_mean;

  std::vector<Vec> dirs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double den = std::sqrt(1.0 + rho_[i] * rho_[i]);
    dirs[i] = (rho_[i] * helix_.T[i] + helix_.B[i]) / den;
  }
  gamma_sp_ = column_splines(helix_.s, helix_.gamma);
  dir_sp_ = column_splines(helix_.s, dirs);

  // Certifications: the z = 0 section reproduces the curve, the patch normal
  // is collinear with the principal normal there, and <N, p0> is constant.
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const PatchEval pe = eval(helix_.s[i], 0.0);
    section_gap_ = std::max(section_gap_, coord_norm(pe.point - helix_.gamma[i]));
    if (sign == 0) {
      sign = sf.inner(pe.N, helix_.N[i]) >= 0 ? 1 : -1;
    }
    normal_collinearity_ =
        std::max(normal_collinearity_, coord_norm(pe.N - sign * helix_.N[i]));
  }
  const double zext = 0.25 * sf.R();
  std::vector<double> lam;
  for (int i = 0; i < 9; ++i) {
    const double s = helix_.s.front() + (helix_.s.back() - helix_.s.front()) * i / 8.0;
    for (int j = 0; j < 7; ++j) {
      const double z = -zext + 2.0 * zext * j / 6.0;
      const PatchEval pe = eval(s, z);
      lam.push_back(sf.inner(pe.N, axis_.p0()));
    }
  }
  double lmean = 0.0;
  for (double l : lam) {
    lmean += l;
  }
  lmean /= static_cast<double>(lam.size());
  for (double l : lam) {
    axis_normal_deviation_ = std::max(axis_normal_deviation_, std::abs(l - lmean));
  }
}

PatchEval HelixRuledPatch::eval(double s, double z) const {
  const SpaceForm& sf = helix_.sf;
  if (s < helix_.s.front() - kRangePad || s > helix_.s.back() + kRangePad) {
    throw std::out_of_range("HelixRuledPatch::eval: s out of range");
  }
  const double R = sf.R();
  const double eps = sf.epsilon();
  const FG v = sf.fg(z / R);

  auto frame_at = [&](double ss) {
    const Vec gamma = ManifoldPoint::project(sf, eval_columns(gamma_sp_, ss)).coords();
    Vec dir = eval_columns(dir_sp_, ss);
    dir = tangent_project_raw(sf, gamma, dir);
    dir /= std::sqrt(sf.inner(dir, dir));
    return std::make_pair(gamma, dir);
  };

  const auto [gamma, dir] = frame_at(s);
  PatchEval out;
  out.point = v.f * gamma + R * v.g * dir;
  out.X_z = -(eps / R) * v.g * gamma + v.f * dir;
  const double h = kTransportStep;
  const auto [gp, dp] = frame_at(s + h);
  const auto [gm, dm] = frame_at(s - h);
  out.X_t = ((v.f * gp + R * v.g * dp) - (v.f * gm + R * v.g * dm)) / (2.0 * h);
  out.N = cross_dual(sf, out.point, out.X_t, out.X_z);
  return out;
}

HelixRuledPatch ruled_from_helix(const FrenetCurve& helix, const ConcircularField& axis,
                                 double tol) {
  return HelixRuledPatch(helix, axis, tol);
}

namespace {

struct RulingRoot {
  bool ok;
  double zeta;
};

/// Solve f(zeta) alpha + R g(zeta) beta = d for the branch through zeta_prev.
RulingRoot solve_ruling_crossing(const SpaceForm& sf, double alpha, double beta, double d,
                                 double zeta_prev) {
  const double R = sf.R();
  double zeta = 0.0;
  if (sf.C() > 0) {
    const double amp = std::hypot(alpha, R * beta);
    if (amp < std::abs(d) * (1.0 + 1e-12) || amp < 1e-12) {
      return {false, 0.0};
    }
    const double phi0 = std::atan2(R * beta, alpha);
    const double dz = std::acos(std::clamp(d / amp, -1.0, 1.0));
    double best = 0.0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (double cand : {phi0 + dz, phi0 - dz}) {
      // wrap to the 2 pi translate nearest the previous root
      const double k = std::round((zeta_prev - cand) / (2.0 * std::numbers::pi));
      const double wrapped = cand + 2.0 * std::numbers::pi * k;
      if (std::abs(wrapped - zeta_prev) < best_gap) {
        best_gap = std::abs(wrapped - zeta_prev);
        best = wrapped;
      }
    }
    zeta = best;
  } else {
    const double ap = 0.5 * (alpha + R * beta);
    const double am = 0.5 * (alpha - R * beta);
    const double x_prev = std::exp(zeta_prev);
    double x = 0.0;
    if (std::abs(ap) < 1e-14) {
      if (std::abs(d) < 1e-14) {
        return {false, 0.0};
      }
      x = am / d;
    } else {
      const double disc = d * d - 4.0 * ap * am;
      if (disc < 0.0) {
        return {false, 0.0};
      }
      const double r1 = (d + std::sqrt(disc)) / (2.0 * ap);
      const double r2 = (d - std::sqrt(disc)) / (2.0 * ap);
      x = -1.0;
      for (double cand : {r1, r2}) {
        if (cand > 0.0 && (x <= 0.0 || std::abs(cand - x_prev) < std::abs(x - x_prev))) {
          x = cand;
        }
      }
    }
    if (!(x > 0.0)) {
      return {false, 0.0};
    }
    zeta = std::log(x);
  }
  // Newton polish on F(zeta) = alpha f + R beta g - d.
  const double eps = sf.epsilon();
  for (int it = 0; it < 3; ++it) {
    const FG v = sf.fg(zeta);
    const double F = alpha * v.f + R * beta * v.g - d;
    const double dF = -eps * alpha * v.g + R * beta * v.f;
    if (std::abs(dF) < 1e-4 * std::max(1.0, std::abs(d))) {
      return {false, 0.0};  // ruling tangent to Q, transversality lost
    }
    zeta -= F / dF;
  }
  const FG v = sf.fg(zeta);
  const double dF = -eps * alpha * v.g + R * beta * v.f;
  if (std::abs(dF) < 1e-4 * std::max(1.0, std::abs(d))) {
    return {false, 0.0};
  }
  return {true, zeta};
}

}  // namespace

HelixSurfaceDecomposition surface_from_helix(const FrenetCurve& helix,
                                             const ConcircularField& axis) {
  const SpaceForm& sf = helix.sf;
  const std::size_t n = helix.size();
  if (n < 16) {
    throw std::invalid_argument("surface_from_helix: helix too short");
  }
  const double R = sf.R();
  const double C = sf.C();
  const double eps = sf.epsilon();
  const AxisDecomposition dec = decompose_axis(helix, axis);

  // Base point: maximal transversality |b| away from the range ends.
  std::size_t i_star = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double win =
        (helix.s[i] - helix.s.front()) * (helix.s.back() - helix.s[i]);
    const double score = std::abs(dec.b[i]) * win;
    if (score > best) {
      best = score;
      i_star = i;
    }
  }

  const Vec& p0 = axis.p0();
  const double q0 = sf.inner(p0, p0);
  if (std::abs(q0) < 1e-10) {
    throw std::runtime_error("surface_from_helix: lightlike axis is not supported");
  }
  const Vec p0_hat = p0 / std::sqrt(std::abs(q0));
  const double d = sf.inner(p0_hat, helix.gamma[i_star]);
  UmbilicalSurface Q = make_umbilical(sf, p0_hat, d);

  std::vector<Vec> dirs(n);
  std::vector<double> alpha(n), beta(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = helix.tau[i] / helix.kappa[i];
    dirs[i] = (rho * helix.T[i] + helix.B[i]) / std::sqrt(1.0 + rho * rho);
    alpha[i] = sf.inner(helix.gamma[i], p0_hat);
    beta[i] = sf.inner(dirs[i], p0_hat);
  }

  // Continue the ruling/Q crossing outward from the base point.
  std::vector<double> zeta(n, 0.0);
  std::size_t i_lo = i_star, i_hi = i_star;
  zeta[i_star] = 0.0;
  for (std::size_t i = i_star + 1; i < n; ++i) {
    const RulingRoot root = solve_ruling_crossing(sf, alpha[i], beta[i], d, zeta[i - 1]);
    if (!root.ok) {
      break;
    }
    zeta[i] = root.zeta;
    i_hi = i;
  }
  for (std::size_t i = i_star; i-- > 0;) {
    const RulingRoot root = solve_ruling_crossing(sf, alpha[i], beta[i], d, zeta[i + 1]);
    if (!root.ok) {
      break;
    }
    zeta[i] = root.zeta;
    i_lo = i;
  }
  if (i_hi - i_lo < 15) {
    throw std::runtime_error("surface_from_helix: profile window is too short");
  }

  const std::size_t nw = i_hi - i_lo + 1;
  std::vector<Vec> delta_raw(nw);
  for (std::size_t k = 0; k < nw; ++k) {
    const std::size_t i = i_lo + k;
    const FG v = sf.fg(zeta[i]);
    delta_raw[k] = v.f * helix.gamma[i] + R * v.g * dirs[i];
  }

  // Arclength of the profile along the helix parameter.
  const double hs = helix.step();
  const std::vector<Vec> ddelta = fd_derivative(delta_raw, hs, 1);
  std::vector<double> speed(nw);
  for (std::size_t k = 0; k < nw; ++k) {
    const double v2 = sf.inner(ddelta[k], ddelta[k]);
    if (!(v2 > 1e-10)) {
      throw std::runtime_error("surface_from_helix: profile degenerates inside the window");
    }
    speed[k] = std::sqrt(v2);
  }
  std::vector<double> t_cum(nw, 0.0);
  for (std::size_t k = 1; k < nw; ++k) {
    t_cum[k] = t_cum[k - 1] + 0.5 * (speed[k - 1] + speed[k]) * hs;
  }
  const double t_star = t_cum[i_star - i_lo];
  for (double& t : t_cum) {
    t -= t_star;
  }

  // Resample onto a uniform arclength grid containing t = 0.
  std::array<CubicSpline, 4> delta_sp;
  {
    std::vector<double> col(nw);
    for (int c = 0; c < 4; ++c) {
      for (std::size_t k = 0; k < nw; ++k) {
        col[k] = delta_raw[k][c];
      }
      delta_sp[c] = CubicSpline(t_cum, col);
    }
  }
  CubicSpline s_of_t(t_cum, std::vector<double>(helix.s.begin() + i_lo,
                                                helix.s.begin() + i_hi + 1));
  CubicSpline zeta_of_t(t_cum, std::vector<double>(zeta.begin() + i_lo, zeta.begin() + i_hi + 1));

  const double step = hs;
  const long k_lo = static_cast<long>(std::ceil(t_cum.front() / step - 1e-9));
  const long k_hi = static_cast<long>(std::floor(t_cum.back() / step + 1e-9));
  if (k_hi - k_lo < 10) {
    throw std::runtime_error("surface_from_helix: resampled profile is too short");
  }
  const std::size_t nt = static_cast<std::size_t>(k_hi - k_lo + 1);

  const std::array<CubicSpline, 4> gamma_sp = column_splines(helix.s, helix.gamma);
  const std::array<CubicSpline, 4> dir_sp = column_splines(helix.s, dirs);

  ProfileCurve prof;
  prof.t.resize(nt);
  prof.delta.resize(nt);
  prof.T.resize(nt);
  prof.N.resize(nt);
  prof.eta2.resize(nt);
  prof.kappa.resize(nt);
  std::vector<double> cos_c(nt), sin_c(nt);

  for (std::size_t j = 0; j < nt; ++j) {
    const double t = static_cast<double>(k_lo + static_cast<long>(j)) * step;
    prof.t[j] = t;
    Vec draw(4), dT(4);
    for (int c = 0; c < 4; ++c) {
      draw[c] = delta_sp[c].eval(t);
      dT[c] = delta_sp[c].deriv(t);
    }
    const Vec delta = ManifoldPoint::project(sf, draw).coords();
    Vec T = tangent_project_raw(sf, delta, dT);
    T /= std::sqrt(sf.inner(T, T));
    Vec eta2 = (p0_hat - C * d * delta) / Q.w();
    eta2 = tangent_project_raw(sf, delta, eta2);
    eta2 -= sf.inner(eta2, T) * T;
    eta2 /= std::sqrt(sf.inner(eta2, eta2));
    const Vec N = cross_dual(sf, delta, T, eta2);

    prof.delta[j] = delta;
    prof.T[j] = T;
    prof.N[j] = N;
    prof.eta2[j] = eta2;
    prof.q_drift = std::max(prof.q_drift, std::abs(sf.inner(delta, p0_hat) - d));

    // Ruling direction through delta(t): X_z of the helix-generated patch at
    // the crossing parameter.
    const double ss = s_of_t.eval(t);
    const double zc = zeta_of_t.eval(t);
    Vec gamma_s = ManifoldPoint::project(sf, eval_columns(gamma_sp, ss)).coords();
    Vec dir_s = eval_columns(dir_sp, ss);
    dir_s = tangent_project_raw(sf, gamma_s, dir_s);
    dir_s /= std::sqrt(sf.inner(dir_s, dir_s));
    const FG vz = sf.fg(zc);
    Vec W = -(eps / R) * vz.g * gamma_s + vz.f * dir_s;
    W = tangent_project_raw(sf, delta, W);
    W /= std::sqrt(sf.inner(W, W));
    cos_c[j] = sf.inner(W, N);
    sin_c[j] = sf.inner(W, eta2);
  }

  // kappa_delta = <T', N> on the uniform grid.
  const std::vector<Vec> Tp = fd_derivative(prof.T, step, 1);
  for (std::size_t j = 0; j < nt; ++j) {
    prof.kappa[j] = sf.inner(Tp[j], prof.N[j]);
  }

  double sc = 0.0, cc = 0.0;
  for (std::size_t j = 0; j < nt; ++j) {
    sc += sin_c[j];
    cc += cos_c[j];
  }
  const double angle_a = std::atan2(sc, cc);
  double spread = 0.0;
  for (std::size_t j = 0; j < nt; ++j) {
    double diff = std::atan2(sin_c[j], cos_c[j]) - angle_a;
    diff = std::remainder(diff, 2.0 * std::numbers::pi);
    spread = std::max(spread, std::abs(diff));
  }

  double z_lo = 0.0, z_hi = 0.0;
  for (std::size_t i = i_lo; i <= i_hi; ++i) {
    z_lo = std::min(z_lo, -R * zeta[i]);
    z_hi = std::max(z_hi, -R * zeta[i]);
  }
  const std::array<double, 2> z_range = {z_lo - 0.05, z_hi + 0.05};

  HelixSurfaceDecomposition out{
      ConcircularSurface(std::move(Q), std::move(prof), angle_a, z_range),
      helix.s[i_star],
      helix.s[i_lo],
      helix.s[i_hi],
      std::vector<double>(helix.s.begin() + static_cast<long>(i_lo),
                          helix.s.begin() + static_cast<long>(i_hi) + 1),
      {},
      t_cum,
      angle_a,
      spread};
  out.z_star.resize(nw);
  for (std::size_t k = 0; k < nw; ++k) {
    out.z_star[k] = R * zeta[i_lo + k];
  }
  return out;
}

}  // namespace sfgeo
