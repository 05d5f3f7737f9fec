#include "sfgeo/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sfgeo {

double metric_E(const ConcircularSurface& S, double t, double z) { return S.metric_E(t, z); }

GeodesicSolution integrate_geodesic(const ConcircularSurface& S, const GeodesicState& init,
                                    double s_start, double s_end, double step) {
  const SpaceForm& sf = S.space_form();
  const double C = sf.C();
  const double R = sf.R();
  const double m = S.umbilical().m();
  const double ca = std::cos(S.angle_a()), sa = std::sin(S.angle_a());

  OdeProblem problem;
  problem.state_dim = 3;
  problem.s_start = s_start;
  problem.s_end = s_end;
  problem.step = step;
  problem.y0 = Vec::Zero(3);
  problem.y0 << init.t, init.z, init.theta;
  problem.rhs = [&](double, const Vec& y) {
    const double E = S.metric_E(y[0], y[1]);
    const double tp = std::sin(y[2]) / std::sqrt(E);
    const FG v = sf.fg(y[1] / R);
    Vec dy(3);
    dy[0] = tp;
    dy[1] = std::cos(y[2]);
    dy[2] = tp * (C * R * v.g + v.f * (sa * m + ca * S.kappa_delta(y[0])));
    return dy;
  };

  const Trajectory traj = integrate(problem);
  GeodesicSolution sol;
  sol.s = traj.s;
  const std::size_t n = traj.size();
  sol.states.resize(n);
  sol.embedded.resize(n);
  sol.kappa_pred.resize(n);
  sol.tau_pred.resize(n);

  std::vector<Vec> T_rec(n), N_patch(n), B_paper(n);
  std::vector<double> tprime(n), kraw(n), traw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& y = traj.states[i];
    sol.states[i] = {y[0], y[1], y[2]};
    const PatchEval pe = S.eval_patch(y[0], y[1]);
    sol.embedded[i] = pe.point;
    const double E = sf.inner(pe.X_t, pe.X_t);
    const Vec That = pe.X_t / std::sqrt(E);
    const double st = std::sin(y[2]), ct = std::cos(y[2]);
    T_rec[i] = st * That + ct * pe.X_z;
    N_patch[i] = pe.N;
    B_paper[i] = ct * That - st * pe.X_z;
    tprime[i] = st / std::sqrt(E);
    const double kd = S.kappa_delta(y[0]);
    kraw[i] = st * tprime[i] * (m * ca - sa * kd);
    traw[i] = ct * tprime[i] * (-m * ca + sa * kd);
  }

  // Resolve the two discrete sign branches at the first sample where the
  // acceleration is usable: N_gamma = sigma N, B_gamma = sigma sigma0 B_paper.
  sol.sigma = 1;
  sol.sigma0 = 1;
  if (n >= 5) {
    const std::vector<Vec> Tp = fd_derivative(T_rec, traj.step(), 1);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec w = Tp[i] + C * sol.embedded[i];
      if (coord_norm(w) >= 1e-3) {
        sol.sigma = sf.inner(w, N_patch[i]) >= 0 ? 1 : -1;
        const Vec cd = cross_dual(sf, sol.embedded[i], T_rec[i], N_patch[i]);
        sol.sigma0 = sf.inner(cd, B_paper[i]) >= 0 ? 1 : -1;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    sol.kappa_pred[i] = sol.sigma * kraw[i];
    sol.tau_pred[i] = sol.sigma0 * traw[i];
  }
  return sol;
}

GeodesicDefect geodesic_defect(const ConcircularSurface& S, const GeodesicSolution& sol) {
  const SpaceForm& sf = S.space_form();
  const double C = sf.C();
  const std::size_t n = sol.s.size();
  if (n < 5) {
    throw std::invalid_argument("geodesic_defect: solution too short");
  }
  const double h = sol.s[1] - sol.s[0];
  std::vector<Vec> acc = fd_derivative(sol.embedded, h, 2);
  extrapolate_boundary(acc, 2);

  GeodesicDefect out{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec w = acc[i] + C * sol.embedded[i];
    const PatchEval pe = S.eval_patch(sol.states[i].t, sol.states[i].z);
    const double E = sf.inner(pe.X_t, pe.X_t);
    const Vec e1 = pe.X_t / std::sqrt(E);
    Vec e2 = pe.X_z - sf.inner(pe.X_z, e1) * e1;
    e2 /= std::sqrt(sf.inner(e2, e2));
    const Vec tang = sf.inner(w, e1) * e1 + sf.inner(w, e2) * e2;
    out.tangential = std::max(out.tangential, coord_norm(tang));
    const double wn = std::sqrt(std::max(0.0, sf.inner(w, w)));
    if (wn >= 1e-3) {
      const double c = std::clamp(std::abs(sf.inner(w, pe.N)) / wn, 0.0, 1.0);
      out.collinearity_angle = std::max(out.collinearity_angle, std::acos(c));
    }
  }
  return out;
}

HelixMeasure geodesic_is_helix(const ConcircularSurface& S, const GeodesicSolution& sol,
                               double kappa_floor) {
  const double h = sol.s[1] - sol.s[0];
  const FrenetCurve fc = frenet_apparatus(S.space_form(), sol.embedded, h, kappa_floor);
  return helix_defect(fc, S.axis());
}

RoundtripReport helix_roundtrip(const FrenetCurve& helix, double lambda,
                                const std::vector<double>& mu, const RoundtripTolerances& tol) {
  RoundtripReport rep;
  rep.lambda = lambda;
  const SpaceForm& sf = helix.sf;
  const double C = sf.C();

  // Stage 1: the scalar structure equations certify a proper helix.
  try {
    const Case2Residuals res = case2_residuals(helix, lambda, mu);
    rep.case2_r1 = res.r1;
    rep.case2_r2 = res.r2;
  } catch (const std::exception& e) {
    rep.failed_stage = "structure";
    rep.detail = e.what();
    return rep;
  }
  if (rep.case2_r1 > tol.structure || rep.case2_r2 > tol.structure ||
      std::abs(lambda) < 1e-6) {
    rep.failed_stage = "structure";
    rep.detail = "residuals exceed tolerance or lambda = 0 (not proper)";
    return rep;
  }

  // Stage 2: rebuild the axis from (lambda, mu).
  ConcircularField axis(sf, Vec::Zero(sf.dim_ambient()));
  try {
    axis = reconstruct_axis(helix, lambda, mu, tol.structure).field;
  } catch (const std::exception& e) {
    rep.failed_stage = "axis";
    rep.detail = e.what();
    return rep;
  }

  // Stage 3: the ruled patch over the curve; its z = 0 section is the curve.
  try {
    const HelixRuledPatch patch = ruled_from_helix(helix, axis, tol.structure);
    rep.section_gap = patch.section_gap();
  } catch (const std::exception& e) {
    rep.failed_stage = "ruled-patch";
    rep.detail = e.what();
    return rep;
  }
  if (rep.section_gap > tol.section) {
    rep.failed_stage = "section";
    rep.detail = "z = 0 section does not reproduce the curve";
    return rep;
  }

  // Stage 4: the section is a geodesic of the patch.
  {
    const std::size_t n = helix.size();
    std::vector<Vec> acc = fd_derivative(helix.gamma, helix.step(), 2);
    extrapolate_boundary(acc, 2);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec w = acc[i] + C * helix.gamma[i];
      const double rho = helix.tau[i] / helix.kappa[i];
      const Vec& e1 = helix.T[i];
      Vec e2 = (rho * helix.T[i] + helix.B[i]) / std::sqrt(1.0 + rho * rho);
      e2 -= sf.inner(e2, e1) * e1;
      e2 /= std::sqrt(sf.inner(e2, e2));
      const Vec tang = sf.inner(w, e1) * e1 + sf.inner(w, e2) * e2;
      rep.section_geodesic_defect = std::max(rep.section_geodesic_defect, coord_norm(tang));
    }
    if (rep.section_geodesic_defect > tol.section_geodesic) {
      rep.failed_stage = "section-geodesic";
      rep.detail = "the curve is not a geodesic of its ruled patch";
      return rep;
    }
  }

  // Stage 5: canonical form Psi_a over an umbilical slice.
  try {
    const HelixSurfaceDecomposition dec = surface_from_helix(helix, axis);
    rep.window_coverage = (dec.s_hi - dec.s_lo) / (helix.s.back() - helix.s.front());

    // Stage 6: re-integrate the geodesic system from the base point and match.
    const ConcircularSurface& S = dec.surface;
    const double h = helix.step();
    const auto i_star =
        static_cast<std::size_t>(std::llround((dec.s_star - helix.s.front()) / h));
    const PatchEval pe0 = S.eval_patch(0.0, 0.0);
    const double E0 = sf.inner(pe0.X_t, pe0.X_t);
    const double st0 = sf.inner(helix.T[i_star], pe0.X_t) / std::sqrt(E0);
    const double ct0 = sf.inner(helix.T[i_star], pe0.X_z);
    const auto i_lo =
        static_cast<std::size_t>(std::llround((dec.s_lo - helix.s.front()) / h));
    const auto i_hi =
        static_cast<std::size_t>(std::llround((dec.s_hi - helix.s.front()) / h));

    if (i_hi > i_star + 2) {
      const GeodesicState init{0.0, 0.0, std::atan2(st0, ct0)};
      const GeodesicSolution fwd =
          integrate_geodesic(S, init, 0.0, dec.s_hi - dec.s_star, h);
      for (std::size_t j = 0; j < fwd.s.size() && i_star + j <= i_hi; ++j) {
        rep.reintegration_gap = std::max(
            rep.reintegration_gap, coord_norm(fwd.embedded[j] - helix.gamma[i_star + j]));
      }
    }
    if (i_star > i_lo + 2) {
      const GeodesicState init{0.0, 0.0, std::atan2(-st0, -ct0)};
      const GeodesicSolution bwd =
          integrate_geodesic(S, init, 0.0, dec.s_star - dec.s_lo, h);
      for (std::size_t j = 0; j < bwd.s.size() && j <= i_star - i_lo; ++j) {
        rep.reintegration_gap = std::max(
            rep.reintegration_gap, coord_norm(bwd.embedded[j] - helix.gamma[i_star - j]));
      }
    }
  } catch (const std::exception& e) {
    rep.failed_stage = "surface";
    rep.detail = e.what();
    return rep;
  }
  if (rep.reintegration_gap > tol.reintegration) {
    rep.failed_stage = "reintegrate";
    rep.detail = "re-integrated geodesic does not match the curve";
    return rep;
  }

  rep.pass = true;
  return rep;
}

}  // namespace sfgeo
