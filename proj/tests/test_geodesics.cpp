#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sfgeo/checks.hpp"
#include "sfgeo/geodesics.hpp"

#include <cmath>
#include <numbers>

using namespace sfgeo;

namespace {

Vec e(int i) { return Vec::Unit(4, i); }

ConcircularSurface small_sphere_surface(double angle_a, double kappa_delta = 0.3,
                                        double z_hi = 0.35) {
  const SpaceForm sphere(1.0);
  UmbilicalSurface Q = make_umbilical(sphere, e(3), 1.0 / std::sqrt(2.0));
  ProfileCurve prof = integrate_profile(
      Q, [=](double) { return kappa_delta; }, default_profile_frame(Q), -1.1, 1.1, 1e-3);
  return ConcircularSurface(std::move(Q), std::move(prof), angle_a, {-0.35, z_hi});
}

double unit_speed_defect(const ConcircularSurface& S, const GeodesicSolution& sol) {
  const SpaceForm& sf = S.space_form();
  double worst = 0.0;
  for (std::size_t i = 0; i < sol.s.size(); ++i) {
    const PatchEval pe = S.eval_patch(sol.states[i].t, sol.states[i].z);
    const double E = sf.inner(pe.X_t, pe.X_t);
    const Vec T = std::sin(sol.states[i].theta) * pe.X_t / std::sqrt(E) +
                  std::cos(sol.states[i].theta) * pe.X_z;
    worst = std::max(worst, std::abs(sf.inner(T, T) - 1.0));
  }
  return worst;
}

}  // namespace

TEST_CASE("metric coefficient") {
  const ConcircularSurface S = small_sphere_surface(0.6);
  SUBCASE("E = 1 on the unit-speed profile") {
    CHECK(std::abs(metric_E(S, 0.2, 0.0) - 1.0) <= 1e-6);
  }
  SUBCASE("E is continuous in z") {
    const double h = 1e-4;
    const double e0 = metric_E(S, 0.1, 0.2);
    CHECK(std::abs(metric_E(S, 0.1, 0.2 + h) - e0) <= 50 * h);
  }
  SUBCASE("E degenerates at the cone vertex") {
    // rulings focus at z0 = pi/4; E = (cos z - sin z)^2 vanishes there
    const ConcircularSurface cone = small_sphere_surface(std::numbers::pi / 2.0, 0.3, 0.8);
    const double e_near = metric_E(cone, 0.0, 0.78);
    const double expected = std::pow(std::cos(0.78) - std::sin(0.78), 2.0);
    CHECK(std::abs(e_near - expected) <= 1e-4);
    CHECK(e_near < 1e-3);
    CHECK_THROWS_AS(metric_E(cone, 0.0, std::numbers::pi / 4.0), std::domain_error);
  }
}

TEST_CASE("rulings integrate as geodesics with zero curvature") {
  const ConcircularSurface S = small_sphere_surface(0.6);
  const GeodesicSolution sol = integrate_geodesic(S, {0.15, -0.2, 0.0}, 0.0, 0.5, 1e-3);
  for (std::size_t i = 0; i < sol.s.size(); ++i) {
    CHECK(std::abs(sol.states[i].t - 0.15) <= 1e-12);
    CHECK(std::abs(sol.states[i].theta) <= 1e-12);
    CHECK(std::abs(sol.kappa_pred[i]) <= 1e-12);
  }
  const GeodesicDefect gd = geodesic_defect(S, sol);
  CHECK(gd.tangential <= 1e-6);
}

TEST_CASE("generic geodesics keep unit speed") {
  corpus::Rng rng(514u);
  const ConcircularSurface S = small_sphere_surface(0.6);
  const GeodesicSolution sol = corpus::random_geodesic(S, rng, 1e-3);
  CHECK(unit_speed_defect(S, sol) <= 1e-8);
  const GeodesicDefect gd = geodesic_defect(S, sol);
  CHECK(gd.tangential <= 1e-5);
  CHECK(gd.collinearity_angle <= 1e-4);
}

TEST_CASE("profile curves at theta = pi/2 are not geodesics") {
  const ConcircularSurface S = small_sphere_surface(0.6);
  // walk the profile: t(s) = s, z = 0, theta = pi/2, ignoring the geodesic
  // angle equation
  const std::size_t n = 501;
  GeodesicSolution fake;
  fake.s.resize(n);
  fake.states.resize(n);
  fake.embedded.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = -0.25 + static_cast<double>(i) * 1e-3;
    fake.s[i] = s;
    fake.states[i] = {s, 0.0, std::numbers::pi / 2.0};
    fake.embedded[i] = S.eval_patch(s, 0.0).point;
  }
  const GeodesicDefect gd = geodesic_defect(S, fake);
  CHECK(gd.tangential > 1e-3);
}

TEST_CASE("predicted curvature and torsion match the frenet oracle") {
  corpus::Rng rng(515u);
  for (double C : {1.0, -1.0}) {
    const SpaceForm sf(C);
    const auto [S, sol] = corpus::random_surface_with_geodesic(sf, rng, 1e-3);
    const FrenetCurve fc = frenet_apparatus(sf, sol.embedded, 1e-3, 1e-3);
    double worst = 0.0;
    for (std::size_t i = 0; i < fc.size(); ++i) {
      worst = std::max(worst, std::abs(fc.kappa[i] - sol.kappa_pred[i]));
      worst = std::max(worst, std::abs(fc.tau[i] - sol.tau_pred[i]));
    }
    CHECK(worst <= 1e-4);
  }
}

TEST_CASE("binormal identity along geodesics") {
  corpus::Rng rng(516u);
  const SpaceForm sf(1.0);
  const auto [S, sol] = corpus::random_surface_with_geodesic(sf, rng, 1e-3);
  const FrenetCurve fc = frenet_apparatus(sf, sol.embedded, 1e-3, 1e-3);
  double worst = 0.0;
  for (std::size_t i = 0; i < fc.size(); ++i) {
    const PatchEval pe = S.eval_patch(sol.states[i].t, sol.states[i].z);
    const double E = sf.inner(pe.X_t, pe.X_t);
    const Vec B_paper = std::cos(sol.states[i].theta) * pe.X_t / std::sqrt(E) -
                        std::sin(sol.states[i].theta) * pe.X_z;
    worst = std::max(
        worst, coord_norm(fc.B[i] - (sol.sigma * sol.sigma0) * B_paper));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("certified geodesics are concircular helices") {
  corpus::Rng rng(517u);
  for (double C : {1.0, -1.0}) {
    const SpaceForm sf(C);
    const auto [S, sol] = corpus::random_surface_with_geodesic(sf, rng, 1e-3);
    REQUIRE(geodesic_defect(S, sol).tangential <= 1e-5);
    const HelixMeasure hm = geodesic_is_helix(S, sol);
    CHECK(hm.deviation <= 1e-5);
  }
}

TEST_CASE("geodesics of conical surfaces are rectifying curves") {
  const ConcircularSurface cone = small_sphere_surface(std::numbers::pi / 2.0, 0.6, 0.6);
  const GeodesicSolution sol = integrate_geodesic(cone, {0.0, 0.0, 0.8}, 0.0, 0.55, 1e-3);
  const HelixMeasure hm = geodesic_is_helix(cone, sol);
  CHECK(std::abs(hm.lambda_mean) <= 1e-5);
  CHECK(hm.deviation <= 1e-5);

  SUBCASE("the rectifying structure reconstructs a lambda = 0 axis") {
    const FrenetCurve fc = frenet_apparatus(cone.space_form(), sol.embedded, 1e-3, 1e-3);
    const AxisDecomposition dec = decompose_axis(fc, cone.axis());
    for (double l : dec.lambda) {
      CHECK(std::abs(l) <= 1e-5);
    }
    // rebuilding the axis from (lambda = 0, mu) recovers the slice normal
    const AxisReconstruction rec = reconstruct_axis(fc, 0.0, dec.mu);
    CHECK(coord_norm(rec.field.p0() - cone.umbilical().p0_hat()) <= 1e-4);
    CHECK(helix_defect(fc, rec.field).deviation <= 1e-5);
  }
}

TEST_CASE("helix roundtrip: both curvatures") {
  for (double C : {1.0, -1.0}) {
    const SpaceForm sf(C);
    const Case1Synthesis syn = synthesize_case1(sf, {1.0, 1.0, 1.0, 0.0}, 0.0, 2.0, 1e-3);
    const RoundtripReport rep = helix_roundtrip(syn.curve, syn.lambda, syn.mu);
    INFO("stage: ", rep.failed_stage, " detail: ", rep.detail);
    CHECK(rep.pass);
    CHECK(rep.case2_r1 <= 1e-4);
    CHECK(rep.case2_r2 <= 1e-4);
    CHECK(rep.section_gap <= 1e-10);
    CHECK(rep.section_geodesic_defect <= 1e-5);
    CHECK(rep.reintegration_gap <= 1e-4);
    CHECK(rep.window_coverage >= 0.9);
  }
}

TEST_CASE("helix roundtrip rejects planar input") {
  const SpaceForm sphere(1.0);
  CurveSpec planar;
  planar.kappa = [](double) { return 1.0; };
  planar.tau = [](double) { return 0.0; };
  planar.s_start = 0.0;
  planar.s_end = 1.5;
  planar.init = default_frenet_state(sphere);
  const FrenetCurve c = integrate_frenet(sphere, planar);
  std::vector<double> mu(c.size(), 0.2);
  const RoundtripReport rep = helix_roundtrip(c, 0.3, mu);
  CHECK_FALSE(rep.pass);
  CHECK(rep.failed_stage == "structure");
}
