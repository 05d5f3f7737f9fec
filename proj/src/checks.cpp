#include "sfgeo/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sfgeo {

namespace corpus {

SpaceForm random_space_form(Rng& rng) {
  std::uniform_int_distribution<int> coin(0, 1);
  return SpaceForm(coin(rng) == 0 ? 1.0 : -1.0);
}

ManifoldPoint random_point(const SpaceForm& sf, Rng& rng) {
  const ManifoldPoint base(sf, sf.R() * Vec::Unit(4, 0));
  const TangentVector dir = random_unit_tangent(sf, base, rng);
  std::uniform_real_distribution<double> dist(0.15, 1.2);
  return exp_map(sf, base, dir, dist(rng) * sf.R());
}

TangentVector random_unit_tangent(const SpaceForm& sf, const ManifoldPoint& p, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vec v(4);
    for (int i = 0; i < 4; ++i) {
      v[i] = gauss(rng);
    }
    v = tangent_project_raw(sf, p.coords(), v);
    const double n2 = sf.inner(v, v);
    if (n2 > 1e-6) {
      return TangentVector(p, v / std::sqrt(n2));
    }
  }
  throw std::runtime_error("random_unit_tangent: rejection sampling failed");
}

ConcircularField random_field(const SpaceForm& sf, Rng& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vec p0(4);
    for (int i = 0; i < 4; ++i) {
      p0[i] = dist(rng);
    }
    if (coord_norm(p0) > 0.2) {
      return ConcircularField(sf, p0);
    }
  }
  throw std::runtime_error("random_field: rejection sampling failed");
}

Vec negative_control_field(const SpaceForm& sf, const ManifoldPoint& p) {
  Vec u = Vec::Zero(4);
  u[1] = sf.inner(p.coords(), Vec::Unit(4, 2));
  return tangent_project_raw(sf, p.coords(), u);
}

CurveSpec random_smooth_spec(const SpaceForm& sf, Rng& rng, double kappa_min, double kappa_max,
                             double s_max) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double mid = 0.5 * (kappa_min + kappa_max);
  const double amp = (0.5 * (kappa_max - kappa_min)) * (0.3 + 0.6 * u01(rng));
  const double base = std::max(kappa_min + amp * 1.05, mid + 0.3 * (u01(rng) - 0.5));
  const double om_k = 0.4 + 0.7 * u01(rng);
  const double ph_k = 2.0 * std::numbers::pi * u01(rng);
  const double tau0 = -0.6 + 1.2 * u01(rng);
  const double tau_amp = 0.4 * u01(rng);
  const double om_t = 0.4 + 0.7 * u01(rng);
  const double ph_t = 2.0 * std::numbers::pi * u01(rng);

  CurveSpec spec;
  spec.kappa = [=](double s) { return base + amp * std::sin(om_k * s + ph_k); };
  spec.tau = [=](double s) { return tau0 + tau_amp * std::sin(om_t * s + ph_t); };
  spec.s_start = 0.0;
  spec.s_end = s_max;
  spec.init = default_frenet_state(sf);
  return spec;
}

UmbilicalSurface random_umbilical(const SpaceForm& sf, Rng& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vec p0(4);
    for (int i = 0; i < 4; ++i) {
      p0[i] = gauss(rng);
    }
    if (sf.signature().nu == 1) {
      p0[0] *= 0.25;  // keep the defining vector comfortably spacelike
    }
    if (sf.inner(p0, p0) < 0.2) {
      continue;
    }
    const double d = (sf.C() > 0 ? 0.15 + 0.55 * u01(rng) : -0.6 + 1.2 * u01(rng));
    try {
      return make_umbilical(sf, p0, d);
    } catch (const std::exception&) {
      continue;
    }
  }
  throw std::runtime_error("random_umbilical: rejection sampling failed");
}

ConcircularSurface random_surface(const SpaceForm& sf, Rng& rng, double step) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const UmbilicalSurface Q = random_umbilical(sf, rng);
  const double c0 = 0.25 + 0.55 * u01(rng);
  const double c1 = 0.25 * u01(rng);
  const double om = 0.5 + 0.6 * u01(rng);
  const double ph = 2.0 * std::numbers::pi * u01(rng);
  auto kd = [=](double t) { return c0 + c1 * std::sin(om * t + ph); };
  const ProfileCurve prof =
      integrate_profile(Q, kd, default_profile_frame(Q), -1.2, 1.2, step);
  const double a = 0.25 + 1.05 * u01(rng);
  const double zext = 0.4 * sf.R();
  return ConcircularSurface(Q, prof, a, {-zext, zext});
}

HelixCase1Spec random_case1_spec(const SpaceForm& sf, Rng& rng) {
  (void)sf;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  HelixCase1Spec spec{};
  spec.rho = (coin(rng) == 0 ? 1.0 : -1.0) * (0.6 + 0.8 * u01(rng));
  spec.m = (coin(rng) == 0 ? 1.0 : -1.0) * (0.7 + 0.6 * u01(rng));
  spec.mu0 = (spec.m > 0 ? 1.0 : -1.0) * (0.7 + 0.5 * u01(rng));
  spec.dmu0 = -0.25 + 0.5 * u01(rng);
  return spec;
}

GeodesicSolution random_geodesic(const ConcircularSurface& S, Rng& rng, double step,
                                 double kappa_floor) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const auto tr = S.t_range();
  for (int attempt = 0; attempt < 200; ++attempt) {
    GeodesicState init{};
    init.t = 0.5 * (tr[0] + tr[1]) + 0.2 * (tr[1] - tr[0]) * (u01(rng) - 0.5);
    init.z = 0.06 * (u01(rng) - 0.5);
    init.theta = 0.55 + 0.7 * u01(rng);
    try {
      const GeodesicSolution sol = integrate_geodesic(S, init, 0.0, 0.45, step);
      double kmin = std::numeric_limits<double>::infinity();
      for (double k : sol.kappa_pred) {
        kmin = std::min(kmin, std::abs(k));
      }
      if (kmin >= kappa_floor) {
        return sol;
      }
    } catch (const std::exception&) {
      continue;  // wandered out of the chart; redraw
    }
  }
  throw std::runtime_error("random_geodesic: rejection sampling failed");
}

std::pair<ConcircularSurface, GeodesicSolution> random_surface_with_geodesic(const SpaceForm& sf,
                                                                             Rng& rng,
                                                                             double step,
                                                                             double kappa_floor) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    ConcircularSurface S = random_surface(sf, rng, step);
    try {
      GeodesicSolution sol = random_geodesic(S, rng, step, kappa_floor);
      return {std::move(S), std::move(sol)};
    } catch (const std::exception&) {
      continue;  // this surface admits no well-curved geodesic; redraw
    }
  }
  throw std::runtime_error("random_surface_with_geodesic: rejection sampling failed");
}

Vec bump_patch(const UmbilicalSurface& Q, double amplitude, double u, double v) {
  const ManifoldPoint base = Q.point_at(u, v);
  const Vec eta = Q.eta2_at(base);
  const Vec moved =
      base.coords() + amplitude * std::sin(3.0 * u) * std::sin(2.0 * v) * eta;
  return ManifoldPoint::project(Q.space_form(), moved).coords();
}

}  // namespace corpus

RulingCheck ruling_check(const ConcircularSurface& S, double t0, int nz) {
  const SpaceForm& sf = S.space_form();
  const double C = sf.C();
  const auto& zr = S.z_range();
  const ConcircularField V = S.axis();
  RulingCheck out{0.0, 0.0};
  const double h = kTransportStep;
  for (int j = 0; j < nz; ++j) {
    const double z = zr[0] + (zr[1] - zr[0]) * (j + 0.5) / nz;
    const PatchEval pe = S.eval_patch(t0, z);

    // The ruling is an ambient geodesic: d/dz X_z + C Psi = 0.
    const Vec xzp = S.eval_patch(t0, z + h).X_z;
    const Vec xzm = S.eval_patch(t0, z - h).X_z;
    const Vec acc = (xzp - xzm) / (2.0 * h) + C * pe.point;
    out.geodesic_defect = std::max(out.geodesic_defect, coord_norm(acc));

    // The tangential part of the axis follows the ruling direction.
    const Vec v = V.value(ManifoldPoint(sf, pe.point));
    const double E = sf.inner(pe.X_t, pe.X_t);
    const Vec e1 = pe.X_t / std::sqrt(E);
    Vec e2 = pe.X_z - sf.inner(pe.X_z, e1) * e1;
    e2 /= std::sqrt(sf.inner(e2, e2));
    const Vec tang = sf.inner(v, e1) * e1 + sf.inner(v, e2) * e2;
    const Vec off_ruling = tang - sf.inner(tang, pe.X_z) * pe.X_z;
    out.axis_alignment_defect = std::max(out.axis_alignment_defect, coord_norm(off_ruling));
  }
  return out;
}

namespace {

using corpus::Rng;

std::string fmtg(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

CheckResult check_concircular_defect(Rng& rng) {
  double worst = 0.0;
  int control_hits = 0;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    const SpaceForm sf = corpus::random_space_form(rng);
    const ConcircularField field = corpus::random_field(sf, rng);
    const ManifoldPoint p = corpus::random_point(sf, rng);
    const TangentVector x = corpus::random_unit_tangent(sf, p, rng);
    worst = std::max(worst, concircularity_defect(field, p, x));
    const double control = concircularity_defect_generic(
        sf, [&](const ManifoldPoint& q) { return corpus::negative_control_field(sf, q); }, p, x);
    if (control > 1e-2) {
      ++control_hits;
    }
  }
  const bool pass = worst <= 1e-6 && control_hits >= static_cast<int>(0.95 * n);
  return {"thm-t1-concircular-defect", pass,
          "max defect " + fmtg(worst) + ", control hits " + std::to_string(control_hits) + "/" +
              std::to_string(n)};
}

CheckResult check_gradient_identity(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const SpaceForm sf = corpus::random_space_form(rng);
    const ConcircularField field = corpus::random_field(sf, rng);
    const ManifoldPoint p = corpus::random_point(sf, rng);
    worst = std::max(worst, grad_mu_defect(field, p));
  }
  return {"grad-mu-identity", worst <= 1e-6, "max defect " + fmtg(worst)};
}

CheckResult check_dimension_uniqueness(Rng& rng) {
  bool pass = true;
  std::string detail;
  for (double C : {1.0, -1.0}) {
    const SpaceForm sf(C);
    const auto fields = basis_fields(sf);
    if (fields.size() != 4) {
      pass = false;
      detail = "basis count " + std::to_string(fields.size());
      break;
    }
    // distinct determining vectors must disagree somewhere on a generic sample
    for (int trial = 0; trial < 20; ++trial) {
      const ConcircularField f1 = corpus::random_field(sf, rng);
      const ConcircularField f2 = corpus::random_field(sf, rng);
      if (coord_norm(f1.p0() - f2.p0()) < 1e-6) {
        continue;
      }
      double max_gap = 0.0;
      for (int k = 0; k < 5; ++k) {
        const ManifoldPoint p = corpus::random_point(sf, rng);
        max_gap = std::max(max_gap, coord_norm(f1.value(p) - f2.value(p)));
      }
      if (max_gap < 1e-10) {
        pass = false;
        detail = "distinct fields coincide on samples";
      }
    }
  }
  if (detail.empty()) {
    detail = "dimension 4, generic injectivity holds";
  }
  return {"field-space-dimension", pass, detail};
}

CheckResult check_umbilical_dichotomy(Rng& rng) {
  double worst_defect = 0.0, worst_parallel = 0.0, bump = 1e9;
  bool pass = true;
  std::string err;
  for (double C : {1.0, -1.0}) {
    const SpaceForm sf(C);
    for (int i = 0; i < 2; ++i) {
      try {
        const UmbilicalSurface Q = corpus::random_umbilical(sf, rng);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        std::vector<ManifoldPoint> samples;
        for (int k = 0; k < 6; ++k) {
          samples.push_back(Q.point_at(-0.7 + 1.4 * u01(rng), 2.0 * std::numbers::pi * u01(rng)));
        }
        const UmbilicalInvariants inv = umbilical_invariants(Q, samples);
        worst_defect = std::max(worst_defect, inv.umbilicity_defect);
        for (const ManifoldPoint& p : samples) {
          const Vec v = ConcircularField(sf, Q.p0_hat()).value(p);
          const Vec eta = Q.eta2_at(p);
          worst_parallel =
              std::max(worst_parallel, coord_norm(v - sf.inner(v, eta) * eta));
        }
        bump = std::min(bump, patch_umbilicity_defect(
                                  sf,
                                  [&](double u, double v) {
                                    return corpus::bump_patch(Q, 0.05, u, v);
                                  },
                                  0.35, 0.6));
      } catch (const std::exception& e) {
        pass = false;
        err = e.what();
      }
    }
  }
  pass = pass && worst_defect <= 1e-6 && worst_parallel <= 1e-6 && bump > 1e-2;
  return {"umbilical-dichotomy", pass,
          err.empty() ? "defect " + fmtg(worst_defect) + ", axis-parallel " +
                            fmtg(worst_parallel) + ", bump control " + fmtg(bump)
                      : err};
}

CheckResult check_ruling_geodesics(Rng& rng, double step) {
  double worst_geo = 0.0, worst_axis = 0.0;
  bool pass = true;
  std::string err;
  for (double C : {1.0, -1.0}) {
    try {
      const SpaceForm sf(C);
      const ConcircularSurface S = corpus::random_surface(sf, rng, step);
      for (double t0 : {-0.5, 0.4}) {
        const RulingCheck rc = ruling_check(S, t0);
        worst_geo = std::max(worst_geo, rc.geodesic_defect);
        worst_axis = std::max(worst_axis, rc.axis_alignment_defect);
      }
    } catch (const std::exception& e) {
      pass = false;
      err = e.what();
    }
  }
  pass = pass && worst_geo <= 1e-6 && worst_axis <= 1e-5;
  return {"ruling-geodesics", pass,
          err.empty() ? "geodesic defect " + fmtg(worst_geo) + ", axis alignment " +
                            fmtg(worst_axis)
                      : err};
}

CheckResult check_ruled_classification(Rng& rng, double step) {
  double worst_dev = 0.0, worst_angle = 0.0;
  bool pass = true;
  std::string err;
  for (int i = 0; i < 3; ++i) {
    try {
      const SpaceForm sf(i % 2 == 0 ? 1.0 : -1.0);
      const ConcircularSurface S = corpus::random_surface(sf, rng, step);
      const SurfaceConcircularity sc = surface_concircularity_defect(S);
      worst_dev = std::max(worst_dev, sc.deviation);
      const double a_rec = std::acos(std::clamp(sc.lambda_mean / sc.A, -1.0, 1.0));
      worst_angle = std::max(worst_angle, std::abs(a_rec - S.angle_a()));
    } catch (const std::exception& e) {
      pass = false;
      err = e.what();
    }
  }
  pass = pass && worst_dev <= 1e-6 && worst_angle <= 1e-6;
  return {"ruled-surface-classification", pass,
          err.empty() ? "deviation " + fmtg(worst_dev) + ", angle gap " + fmtg(worst_angle)
                      : err};
}

CheckResult check_conical_vertex(double step) {
  bool pass = true;
  std::string detail;
  try {
    const SpaceForm sf(1.0);
    const UmbilicalSurface Q = make_umbilical(sf, Vec::Unit(4, 3), 1.0 / std::sqrt(2.0));
    const ProfileCurve prof = integrate_profile(
        Q, [](double) { return 0.3; }, default_profile_frame(Q), -0.9, 0.9, step);
    const ConcircularSurface S(Q, prof, std::numbers::pi / 2.0, {-0.3, 0.3});
    const VertexResult vr = vertex_of(S);
    const double gap = std::abs(vr.z0 - std::numbers::pi / 4.0);
    pass = vr.present && gap <= 1e-9 && vr.spread <= 1e-6;
    detail = "z0 gap " + fmtg(gap) + ", spread " + fmtg(vr.spread);

    const SpaceForm hf(-1.0);
    const UmbilicalSurface Qh = make_umbilical(hf, Vec::Unit(4, 3), 0.5477225575051661);
    const ProfileCurve profh = integrate_profile(
        Qh, [](double) { return 0.3; }, default_profile_frame(Qh), -0.9, 0.9, step);
    const ConcircularSurface Sh(Qh, profh, std::numbers::pi / 2.0, {-0.3, 0.3});
    const VertexResult vrh = vertex_of(Sh);
    if (vrh.present) {
      pass = false;
      detail += "; hyperbolic cone unexpectedly has a vertex";
    } else {
      detail += "; hyperbolic kR<=1 absent";
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  return {"conical-vertex", pass, detail};
}

CheckResult check_geodesic_formulas(Rng& rng, double step) {
  double worst = 0.0;
  bool pass = true;
  std::string err;
  for (int i = 0; i < 3; ++i) {
    try {
      const SpaceForm sf(i % 2 == 0 ? 1.0 : -1.0);
      const auto [S, sol] = corpus::random_surface_with_geodesic(sf, rng, step);
      const FrenetCurve fc = frenet_apparatus(sf, sol.embedded, step, 1e-3);
      for (std::size_t k = 0; k < fc.size(); ++k) {
        worst = std::max(worst, std::abs(fc.kappa[k] - sol.kappa_pred[k]));
        worst = std::max(worst, std::abs(fc.tau[k] - sol.tau_pred[k]));
      }
    } catch (const std::exception& e) {
      pass = false;
      err = e.what();
    }
  }
  pass = pass && worst <= 1e-4;
  return {"geodesic-curvature-torsion", pass,
          err.empty() ? "max formula gap " + fmtg(worst) : err};
}

CheckResult check_helix_geodesic_equivalence(Rng& rng, double step) {
  bool pass = true;
  std::string detail;
  // forward: synthesized helices are geodesics of their ruled surfaces
  for (double C : {1.0, -1.0}) {
    try {
      const SpaceForm sf(C);
      const HelixCase1Spec spec = corpus::random_case1_spec(sf, rng);
      const Case1Synthesis syn = synthesize_case1(sf, spec, 0.0, 1.8, step);
      const RoundtripReport rep = helix_roundtrip(syn.curve, syn.lambda, syn.mu);
      if (!rep.pass) {
        pass = false;
        detail = "roundtrip failed at stage " + rep.failed_stage + " (" + rep.detail + ")";
      }
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
  }
  // reverse: certified surface geodesics are concircular helices
  for (double C : {1.0, -1.0}) {
    try {
      const SpaceForm sf(C);
      const auto [S, sol] = corpus::random_surface_with_geodesic(sf, rng, step);
      const GeodesicDefect gd = geodesic_defect(S, sol);
      const HelixMeasure hm = geodesic_is_helix(S, sol);
      if (gd.tangential > 1e-5 || hm.deviation > 1e-5) {
        pass = false;
        detail = "geodesic defect " + fmtg(gd.tangential) + ", helix deviation " +
                 fmtg(hm.deviation);
      }
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
  }
  if (detail.empty()) {
    detail = "both directions hold on the corpus";
  }
  return {"helix-geodesic-equivalence", pass, detail};
}

}  // namespace

std::vector<CheckResult> run_theorem_checks(unsigned long long seed, double step) {
  Rng rng(seed);
  std::vector<CheckResult> rows;
  rows.push_back(check_concircular_defect(rng));
  rows.push_back(check_gradient_identity(rng));
  rows.push_back(check_dimension_uniqueness(rng));
  rows.push_back(check_umbilical_dichotomy(rng));
  rows.push_back(check_ruling_geodesics(rng, step));
  rows.push_back(check_ruled_classification(rng, step));
  rows.push_back(check_conical_vertex(step));
  rows.push_back(check_geodesic_formulas(rng, step));
  rows.push_back(check_helix_geodesic_equivalence(rng, step));
  return rows;
}

}  // namespace sfgeo
