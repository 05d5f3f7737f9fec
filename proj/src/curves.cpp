#include "sfgeo/curves.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sfgeo {

namespace {

constexpr int kGamma = 0, kT = 4, kN = 8, kB = 12;

Vec seg(const Vec& y, int at) { return y.segment(at, 4); }

/// Gram-Schmidt of (T, N, B) against the position, with the position rescaled
/// onto the quadric. Throws on frame collapse.
void orthonormalize_frame(const SpaceForm& sf, Vec& y) {
  Vec gamma = seg(y, kGamma);
  const double q = sf.inner(gamma, gamma);
  if (q * sf.C() <= 0.0) {
    throw std::runtime_error("frenet frame: position left the quadric's causal cone");
  }
  gamma *= std::sqrt((1.0 / sf.C()) / q);

  std::array<Vec, 3> frame = {seg(y, kT), seg(y, kN), seg(y, kB)};
  for (std::size_t i = 0; i < frame.size(); ++i) {
    Vec& v = frame[i];
    v -= sf.C() * sf.inner(v, gamma) * gamma;
    for (std::size_t j = 0; j < i; ++j) {
      v -= sf.inner(v, frame[j]) * frame[j];
    }
    const double n2 = sf.inner(v, v);
    if (n2 < 1e-12) {
      throw std::runtime_error("frenet frame: degenerate frame during orthonormalization");
    }
    v /= std::sqrt(n2);
  }
  y.segment(kGamma, 4) = gamma;
  y.segment(kT, 4) = frame[0];
  y.segment(kN, 4) = frame[1];
  y.segment(kB, 4) = frame[2];
}

std::vector<double> sample_scalar(const std::function<double(double)>& f,
                                  const std::vector<double>& s) {
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    out[i] = f(s[i]);
  }
  return out;
}

}  // namespace

void FrenetState::validate(const SpaceForm& sf, double tol) const {
  const double target = 1.0 / sf.C();
  if (std::abs(sf.inner(gamma, gamma) - target) > tol * std::max(1.0, std::abs(target))) {
    throw std::invalid_argument("FrenetState: position not on the quadric");
  }
  const std::array<const Vec*, 3> frame = {&T, &N, &B};
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (std::abs(sf.inner(*frame[i], *frame[i]) - 1.0) > tol) {
      throw std::invalid_argument("FrenetState: frame vector not unit");
    }
    if (std::abs(sf.inner(*frame[i], gamma)) > tol * sf.R()) {
      throw std::invalid_argument("FrenetState: frame vector not tangent at gamma");
    }
    for (std::size_t j = i + 1; j < frame.size(); ++j) {
      if (std::abs(sf.inner(*frame[i], *frame[j])) > tol) {
        throw std::invalid_argument("FrenetState: frame vectors not orthogonal");
      }
    }
  }
}

FrenetState default_frenet_state(const SpaceForm& sf) {
  if (sf.dim_ambient() != 4) {
    throw std::invalid_argument("default_frenet_state: curves live in ambient dimension 4");
  }
  FrenetState st;
  st.gamma = sf.R() * Vec::Unit(4, 0);
  st.T = Vec::Unit(4, 1);
  st.N = Vec::Unit(4, 2);
  st.B = Vec::Unit(4, 3);
  return st;
}

FrenetCurve integrate_frenet(const SpaceForm& sf, const CurveSpec& spec, double step) {
  if (sf.dim_ambient() != 4) {
    throw std::invalid_argument("integrate_frenet: ambient dimension must be 4");
  }
  Vec y0(16);
  y0.segment(kGamma, 4) = spec.init.gamma;
  y0.segment(kT, 4) = spec.init.T;
  y0.segment(kN, 4) = spec.init.N;
  y0.segment(kB, 4) = spec.init.B;
  orthonormalize_frame(sf, y0);  // snap the initial frame exactly
  FrenetState snapped{seg(y0, kGamma), seg(y0, kT), seg(y0, kN), seg(y0, kB)};
  snapped.validate(sf, kSnapTol);

  const double C = sf.C();
  OdeProblem problem;
  problem.state_dim = 16;
  problem.s_start = spec.s_start;
  problem.s_end = spec.s_end;
  problem.step = step;
  problem.y0 = y0;
  problem.rhs = [&](double s, const Vec& y) {
    const double kappa = spec.kappa(s);
    if (!(kappa > 0.0)) {
      throw std::domain_error("integrate_frenet: kappa <= 0 at s = " + std::to_string(s));
    }
    const double tau = spec.tau(s);
    Vec dy(16);
    dy.segment(kGamma, 4) = seg(y, kT);
    dy.segment(kT, 4) = -C * seg(y, kGamma) + kappa * seg(y, kN);
    dy.segment(kN, 4) = -kappa * seg(y, kT) + tau * seg(y, kB);
    dy.segment(kB, 4) = -tau * seg(y, kN);
    return dy;
  };

  const Trajectory traj =
      integrate(problem, [&](double, Vec& y) { orthonormalize_frame(sf, y); });

  FrenetCurve out{sf, traj.s, {}, {}, {}, {}, {}, {}};
  out.gamma.reserve(traj.size());
  out.T.reserve(traj.size());
  out.N.reserve(traj.size());
  out.B.reserve(traj.size());
  for (const Vec& y : traj.states) {
    out.gamma.push_back(seg(y, kGamma));
    out.T.push_back(seg(y, kT));
    out.N.push_back(seg(y, kN));
    out.B.push_back(seg(y, kB));
  }
  out.kappa = sample_scalar(spec.kappa, traj.s);
  out.tau = sample_scalar(spec.tau, traj.s);
  return out;
}

FrenetCurve frenet_apparatus(const SpaceForm& sf, const std::vector<Vec>& points, double step,
                             double kappa_floor) {
  // The whole cascade is computed with central stencils only; the strip near
  // each end where a one-sided value would enter (one sample per derivative
  // level) is rebuilt afterwards by least-squares extrapolation from the
  // clean interior. Cascading one-sided stencils directly would amplify the
  // end-vs-interior truncation mismatch by 1/h per level.
  const std::size_t n = points.size();
  if (n < 40) {
    throw std::invalid_argument("frenet_apparatus: need at least 40 samples");
  }
  const double C = sf.C();
  std::vector<Vec> T = fd_derivative(points, step, 1);      // valid on [1, n-2]
  const std::vector<Vec> Tp = fd_derivative(T, step, 1);    // valid on [2, n-3]

  FrenetCurve out{sf, {}, points, std::move(T), {}, {}, {}, {}};
  out.s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.s[i] = static_cast<double>(i) * step;
  }
  out.N.assign(n, Vec::Zero(4));
  out.B.assign(n, Vec::Zero(4));
  out.kappa.assign(n, 0.0);
  out.tau.assign(n, 0.0);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    if (std::abs(sf.inner(out.T[i], out.T[i]) - 1.0) > 1e-4) {
      throw std::invalid_argument("frenet_apparatus: samples are not unit-speed in arclength");
    }
    const Vec w = Tp[i] + C * points[i];
    const double kappa = std::sqrt(std::max(0.0, sf.inner(w, w)));
    if (kappa < kappa_floor) {
      throw std::domain_error("frenet_apparatus: curvature below threshold at s = " +
                              std::to_string(out.s[i]) + " (frame undefined)");
    }
    out.kappa[i] = kappa;
    out.N[i] = w / kappa;
    out.B[i] = cross_dual(sf, points[i], out.T[i], out.N[i]);
  }
  const std::vector<Vec> Np = fd_derivative(out.N, step, 1);  // valid on [3, n-4]
  for (std::size_t i = 3; i + 3 < n; ++i) {
    out.tau[i] = sf.inner(Np[i], out.B[i]);
  }

  extrapolate_boundary(out.T, 1);
  extrapolate_boundary(out.kappa, 2);
  extrapolate_boundary(out.N, 2);
  extrapolate_boundary(out.tau, 3);
  for (std::size_t i = 0; i < n; ++i) {
    if (out.kappa[i] < kappa_floor) {
      throw std::domain_error("frenet_apparatus: curvature below threshold at s = " +
                              std::to_string(out.s[i]) + " (frame undefined)");
    }
    if (i < 2 || i + 2 >= n) {
      // re-orthonormalize the rebuilt frame samples
      Vec tt = tangent_project_raw(sf, points[i], out.T[i]);
      out.T[i] = tt / std::sqrt(sf.inner(tt, tt));
      Vec nn = tangent_project_raw(sf, points[i], out.N[i]);
      nn -= sf.inner(nn, out.T[i]) * out.T[i];
      out.N[i] = nn / std::sqrt(sf.inner(nn, nn));
      out.B[i] = cross_dual(sf, points[i], out.T[i], out.N[i]);
    }
  }
  return out;
}

HelixMeasure helix_defect(const FrenetCurve& curve, const ConcircularField& field) {
  const std::size_t n = curve.size();
  if (n == 0) {
    throw std::invalid_argument("helix_defect: empty curve");
  }
  std::vector<double> lambda(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ManifoldPoint p(curve.sf, curve.gamma[i]);
    lambda[i] = curve.sf.inner(curve.N[i], field.value(p));
    mean += lambda[i];
  }
  mean /= static_cast<double>(n);
  double dev = 0.0;
  for (double l : lambda) {
    dev = std::max(dev, std::abs(l - mean));
  }
  return {mean, dev};
}

double AxisDecomposition::sup_residual() const {
  double r = 0.0;
  for (const auto* col : {&res_tangent, &res_normal, &res_binormal}) {
    for (double v : *col) {
      r = std::max(r, std::abs(v));
    }
  }
  return r;
}

AxisDecomposition decompose_axis(const FrenetCurve& curve, const ConcircularField& field) {
  const std::size_t n = curve.size();
  if (n < 5) {
    throw std::invalid_argument("decompose_axis: need at least 5 samples");
  }
  AxisDecomposition d;
  d.a.resize(n);
  d.lambda.resize(n);
  d.b.resize(n);
  d.mu.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ManifoldPoint p(curve.sf, curve.gamma[i]);
    const Vec v = field.value(p);
    d.a[i] = curve.sf.inner(v, curve.T[i]);
    d.lambda[i] = curve.sf.inner(v, curve.N[i]);
    d.b[i] = curve.sf.inner(v, curve.B[i]);
    d.mu[i] = field.mu(p);
  }
  const double h = curve.step();
  const std::vector<double> ap = fd_derivative(d.a, h, 1);
  const std::vector<double> bp = fd_derivative(d.b, h, 1);
  d.res_tangent.resize(n);
  d.res_normal.resize(n);
  d.res_binormal.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.res_tangent[i] = ap[i] - d.lambda[i] * curve.kappa[i] - d.mu[i];
    d.res_normal[i] = d.a[i] * curve.kappa[i] - d.b[i] * curve.tau[i];
    d.res_binormal[i] = bp[i] + d.lambda[i] * curve.tau[i];
  }
  return d;
}

Case1Synthesis synthesize_case1(const SpaceForm& sf, const HelixCase1Spec& hspec, double s_start,
                                double s_end, double step) {
  if (hspec.rho == 0.0) {
    throw std::invalid_argument("synthesize_case1: rho = 0 is the planar case, excluded");
  }
  if (hspec.m == 0.0) {
    throw std::invalid_argument("synthesize_case1: m must be nonzero");
  }
  if (!(s_end > s_start)) {
    throw std::invalid_argument("synthesize_case1: empty range");
  }
  const double C = sf.C();
  const double rho2 = hspec.rho * hspec.rho;
  const double omega = std::sqrt(std::abs(C) * rho2 / (1.0 + rho2));

  auto mu_fn = [=](double s) {
    if (C > 0) {
      return hspec.mu0 * std::cos(omega * s) + (hspec.dmu0 / omega) * std::sin(omega * s);
    }
    return hspec.mu0 * std::cosh(omega * s) + (hspec.dmu0 / omega) * std::sinh(omega * s);
  };
  auto dmu_fn = [=](double s) {
    if (C > 0) {
      return -hspec.mu0 * omega * std::sin(omega * s) + hspec.dmu0 * std::cos(omega * s);
    }
    return hspec.mu0 * omega * std::sinh(omega * s) + hspec.dmu0 * std::cosh(omega * s);
  };

  // Maximal initial subinterval where kappa = m mu stays above 1e-4.
  constexpr double kKappaFloor = 1e-4;
  if (!(hspec.m * mu_fn(s_start) > kKappaFloor)) {
    throw std::domain_error("synthesize_case1: kappa = m mu is not positive at the range start");
  }
  double s_used = s_end;
  bool truncated = false;
  for (double s = s_start; s <= s_end + 0.5 * step; s += step) {
    if (!(hspec.m * mu_fn(std::min(s, s_end)) > kKappaFloor)) {
      s_used = s - step;
      truncated = true;
      break;
    }
  }
  if (s_used - s_start < 10.0 * step) {
    throw std::domain_error("synthesize_case1: mu vanishes almost immediately on the range");
  }

  CurveSpec spec;
  spec.kappa = [=](double s) { return hspec.m * mu_fn(s); };
  spec.tau = [=](double s) { return hspec.rho * hspec.m * mu_fn(s); };
  spec.s_start = s_start;
  spec.s_end = s_used;
  spec.init = default_frenet_state(sf);

  FrenetCurve curve = integrate_frenet(sf, spec, step);

  // Axis: v = b D + lambda N with D = rho T + B and b = -mu'/(C rho); the
  // determining constant vector is p0 = v - mu gamma, evaluated at s_start.
  const double lambda = hspec.lambda();
  const double b0 = -dmu_fn(s_start) / (C * hspec.rho);
  const Vec D0 = hspec.rho * curve.T.front() + curve.B.front();
  const Vec v0 = b0 * D0 + lambda * curve.N.front();
  const Vec p0 = v0 - mu_fn(s_start) * curve.gamma.front();

  Case1Synthesis out{std::move(spec),
                     std::move(curve),
                     ConcircularField(sf, p0),
                     {},
                     lambda,
                     s_used,
                     truncated};
  out.mu.resize(out.curve.size());
  for (std::size_t i = 0; i < out.curve.size(); ++i) {
    out.mu[i] = mu_fn(out.curve.s[i]);
  }
  return out;
}

namespace {

std::vector<double> lancret_column(const FrenetCurve& curve) {
  std::vector<double> rho(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!(curve.kappa[i] > 1e-9)) {
      throw std::domain_error("lancret curvature: kappa vanishes on the grid");
    }
    rho[i] = curve.tau[i] / curve.kappa[i];
    if (std::abs(rho[i]) < 1e-6) {
      throw std::domain_error("lancret curvature: rho vanishes on the grid (planar regime)");
    }
  }
  return rho;
}

}  // namespace

Case2Residuals case2_residuals(const FrenetCurve& curve, double lambda,
                               const std::vector<double>& mu) {
  if (mu.size() != curve.size() || curve.size() < 16) {
    throw std::invalid_argument("case2_residuals: mu column does not match the grid");
  }
  const std::vector<double> rho = lancret_column(curve);
  const double C = curve.sf.C();
  const double h = curve.step();
  std::vector<double> mup = fd_derivative(mu, h, 1);
  extrapolate_boundary(mup, 1);
  std::vector<double> mupp = fd_derivative(mu, h, 2);
  extrapolate_boundary(mupp, 1);
  std::vector<double> q(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    q[i] = mup[i] / rho[i];
  }
  std::vector<double> qp = fd_derivative(q, h, 1);
  extrapolate_boundary(qp, 2);
  double r1 = 0.0, r2 = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    r1 = std::max(r1, std::abs(mupp[i] + C * mu[i] + C * lambda * curve.kappa[i]));
    r2 = std::max(r2, std::abs(qp[i] - C * lambda * curve.tau[i]));
  }
  return {r1, r2};
}

AxisReconstruction reconstruct_axis(const FrenetCurve& curve, double lambda,
                                    const std::vector<double>& mu, double tol) {
  if (mu.size() != curve.size() || curve.size() < 16) {
    throw std::invalid_argument("reconstruct_axis: mu column does not match the grid");
  }
  const std::vector<double> rho = lancret_column(curve);
  const SpaceForm& sf = curve.sf;
  const double C = sf.C();
  const double h = curve.step();
  std::vector<double> mup = fd_derivative(mu, h, 1);
  extrapolate_boundary(mup, 1);

  // b = a/rho, evaluated through its own structure equation b' = -lambda tau
  // with the constant fitted to a/rho in least squares. Dividing sample-wise
  // by a differenced rho column would re-amplify its noise floor under the
  // transport derivative below.
  const std::size_t n = curve.size();
  std::vector<double> tau_int(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    tau_int[i] = tau_int[i - 1] + 0.5 * (curve.tau[i - 1] + curve.tau[i]) * h;
  }
  double b0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    b0 += (-mup[i] / C) / rho[i] + lambda * tau_int[i];
  }
  b0 /= static_cast<double>(n);

  std::vector<Vec> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = -mup[i] / C;
    const double b = b0 - lambda * tau_int[i];
    v[i] = a * curve.T[i] + lambda * curve.N[i] + b * curve.B[i];
  }

  // Transport identity Dv/ds = mu T (the defining property of a concircular
  // field along a curve).
  std::vector<Vec> vp = fd_derivative(v, h, 1);
  extrapolate_boundary(vp, 2);
  double vlocal = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec cov = tangent_project_raw(sf, curve.gamma[i], vp[i]);
    vlocal = std::max(vlocal, coord_norm(cov - mu[i] * curve.T[i]));
  }
  if (vlocal > tol) {
    throw std::runtime_error("reconstruct_axis: transport defect " + std::to_string(vlocal) +
                             " exceeds tolerance; input is not a concircular helix");
  }

  const Vec p0 = v[0] - mu[0] * curve.gamma[0];
  double dev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dev = std::max(dev, coord_norm(v[i] - mu[i] * curve.gamma[i] - p0));
  }
  return {ConcircularField(sf, p0), vlocal, dev};
}

HelixStructure estimate_helix_structure(const FrenetCurve& curve) {
  const std::size_t n = curve.size();
  if (n < 16) {
    throw std::invalid_argument("estimate_helix_structure: curve too short");
  }
  HelixStructure out;
  double tau_sup = 0.0;
  for (double t : curve.tau) {
    tau_sup = std::max(tau_sup, std::abs(t));
  }
  out.planar = tau_sup < 1e-6;
  if (out.planar) {
    out.rho_range = 0.0;
    out.residual = 0.0;
    out.lambda = 0.0;
    return out;
  }

  std::vector<double> rho(n);
  double rho_min = 0.0, rho_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(curve.kappa[i] > 1e-9)) {
      throw std::domain_error("estimate_helix_structure: kappa vanishes on the grid");
    }
    rho[i] = curve.tau[i] / curve.kappa[i];
    rho_min = i == 0 ? rho[i] : std::min(rho_min, rho[i]);
    rho_max = i == 0 ? rho[i] : std::max(rho_max, rho[i]);
  }
  out.rho_range = rho_max - rho_min;

  // b' = -lambda tau, mu' = -C rho b is linear in (b0, mu0, lambda); build the
  // three basis trajectories and pick the parameter direction minimizing the
  // remaining structure equation a' - lambda kappa - mu with a = rho b.
  const double C = curve.sf.C();
  CubicSpline tau_sp(curve.s, curve.tau);
  CubicSpline rho_sp(curve.s, rho);
  const double h = curve.step();

  Eigen::MatrixXd residuals(static_cast<Eigen::Index>(n), 3);
  std::vector<std::vector<double>> b_cols(3), mu_cols(3);
  for (int j = 0; j < 3; ++j) {
    const double b0 = j == 0 ? 1.0 : 0.0;
    const double mu0 = j == 1 ? 1.0 : 0.0;
    const double lambda = j == 2 ? 1.0 : 0.0;
    OdeProblem problem;
    problem.state_dim = 2;
    problem.s_start = curve.s.front();
    problem.s_end = curve.s.back();
    problem.step = h;
    problem.y0 = Vec::Zero(2);
    problem.y0[0] = b0;
    problem.y0[1] = mu0;
    problem.rhs = [&](double s, const Vec& y) {
      Vec dy(2);
      dy[0] = -lambda * tau_sp.eval(s);
      dy[1] = -C * rho_sp.eval(s) * y[0];
      return dy;
    };
    const Trajectory traj = integrate(problem);
    std::vector<double> a(n), b_col(n), mu_col(n);
    for (std::size_t i = 0; i < n; ++i) {
      b_col[i] = traj.states[i][0];
      mu_col[i] = traj.states[i][1];
      a[i] = rho[i] * b_col[i];
    }
    const std::vector<double> ap = fd_derivative(a, h, 1);
    for (std::size_t i = 0; i < n; ++i) {
      residuals(static_cast<Eigen::Index>(i), j) = ap[i] - lambda * curve.kappa[i] - mu_col[i];
    }
    b_cols[j] = std::move(b_col);
    mu_cols[j] = std::move(mu_col);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(residuals, Eigen::ComputeThinV);
  const Eigen::Vector3d cand = svd.matrixV().col(2);
  out.residual = svd.singularValues()(2) / std::sqrt(static_cast<double>(n));

  out.mu.assign(n, 0.0);
  double mu_sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < 3; ++j) {
      out.mu[i] += cand[j] * mu_cols[j][i];
    }
    mu_sup = std::max(mu_sup, std::abs(out.mu[i]));
  }
  out.lambda = cand[2];
  if (mu_sup > 1e-12) {
    const double scale = 1.0 / mu_sup;
    for (double& m : out.mu) {
      m *= scale;
    }
    out.lambda *= scale;
  }
  return out;
}

}  // namespace sfgeo
