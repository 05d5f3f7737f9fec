#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sfgeo/ambient.hpp"

#include <cmath>
#include <random>

using namespace sfgeo;

namespace {

Vec e(int i) { return Vec::Unit(4, i); }

/// Random point as a geodesic shot from the canonical base point; valid on
/// both the sphere and the upper hyperboloid sheet.
ManifoldPoint random_point(const SpaceForm& sf, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> rdist(0.1, 1.3);
  const ManifoldPoint base(sf, sf.R() * e(0));
  while (true) {
    Vec dir(4);
    for (int i = 0; i < 4; ++i) {
      dir[i] = gauss(rng);
    }
    dir = tangent_project_raw(sf, base.coords(), dir);
    const double n2 = sf.inner(dir, dir);
    if (n2 > 1e-8) {
      return exp_map(sf, base, TangentVector(base, dir / std::sqrt(n2)), rdist(rng));
    }
  }
}

}  // namespace

TEST_CASE("signature inner product") {
  const Signature lorentz(1, 4);
  const Signature euclid(0, 4);
  CHECK(inner(e(0), e(0), lorentz) == -1.0);
  CHECK(inner(e(1), e(1), lorentz) == 1.0);
  CHECK(inner(e(0), e(1), lorentz) == 0.0);
  CHECK(inner(e(0), e(1), euclid) == 0.0);
  CHECK(inner(e(0), e(0), euclid) == 1.0);
  CHECK_THROWS_AS(inner(Vec::Zero(3), e(0), euclid), std::invalid_argument);
}

TEST_CASE("signature construction invariants") {
  CHECK(Signature(0, 4).epsilon == 1);
  CHECK(Signature(1, 4).epsilon == -1);
  CHECK_THROWS_AS(Signature(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(SpaceForm(0.0), std::invalid_argument);
}

TEST_CASE("fg pair identities") {
  for (double C : {1.0, -1.0, 2.5, -0.3}) {
    const SpaceForm sf(C);
    const double eps = sf.epsilon();
    CHECK(sf.fg(0.0).f == 1.0);
    CHECK(sf.fg(0.0).g == 0.0);
    for (double x : {0.7, -1.3, 2.1, 0.05}) {
      const FG v = sf.fg(x);
      CHECK(std::abs(v.f * v.f + eps * v.g * v.g - 1.0) <= 1e-14);
      // derivative identities by central differences
      const double h = 1e-5;
      const FG vp = sf.fg(x + h), vm = sf.fg(x - h);
      CHECK(std::abs((vp.f - vm.f) / (2 * h) - (-eps * v.g)) <= 1e-8);
      CHECK(std::abs((vp.g - vm.g) / (2 * h) - v.f) <= 1e-8);
    }
  }
}

TEST_CASE("point construction snaps and rejects") {
  const SpaceForm sphere(1.0);
  CHECK_NOTHROW(ManifoldPoint(sphere, e(0)));
  // within the snap basin: renormalized
  const ManifoldPoint snapped(sphere, (1.0 + 3e-7) * e(0));
  CHECK(std::abs(sphere.inner(snapped.coords(), snapped.coords()) - 1.0) <= 1e-14);
  CHECK_THROWS_AS(ManifoldPoint(sphere, 1.01 * e(0)), std::invalid_argument);

  const SpaceForm hyp(-1.0);
  CHECK_NOTHROW(ManifoldPoint(hyp, e(0)));
  CHECK_THROWS_AS(ManifoldPoint(hyp, -e(0)), std::invalid_argument);  // lower sheet
  CHECK_THROWS_AS(ManifoldPoint(hyp, e(1)), std::invalid_argument);   // wrong causal type
}

TEST_CASE("exp map basics") {
  const SpaceForm sphere(1.0);
  const ManifoldPoint p(sphere, e(0));
  const TangentVector w(p, e(1));
  CHECK(coord_norm(exp_map(sphere, p, w, 0.0).coords() - p.coords()) <= 1e-15);
  const ManifoldPoint q = exp_map(sphere, p, w, std::acos(-1.0) / 2.0);
  CHECK(coord_norm(q.coords() - e(1)) <= 1e-12);
  CHECK_THROWS_AS(exp_map(sphere, p, TangentVector(p, 1.5 * e(1)), 0.3), std::invalid_argument);
  CHECK_THROWS_AS(TangentVector(p, p.coords()), std::invalid_argument);  // not tangent
}

TEST_CASE("exp map stays on the quadric") {
  std::mt19937_64 rng(20240801u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> tdist(-2.0, 2.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const SpaceForm sf(trial % 2 == 0 ? 1.0 : -1.0);
    const ManifoldPoint p = random_point(sf, rng);
    Vec dir(4);
    for (int i = 0; i < 4; ++i) {
      dir[i] = gauss(rng);
    }
    dir = tangent_project_raw(sf, p.coords(), dir);
    const double n2 = sf.inner(dir, dir);
    if (n2 < 1e-8) {
      continue;
    }
    const TangentVector w(p, dir / std::sqrt(n2));
    const ManifoldPoint q = exp_map(sf, p, w, tdist(rng));
    const double gap = std::abs(sf.inner(q.coords(), q.coords()) - 1.0 / sf.C());
    CHECK(gap <= 1e-12);
  }
}

TEST_CASE("tangent projection") {
  const SpaceForm sphere(1.0);
  const ManifoldPoint p2(sphere, e(1));
  SUBCASE("kills the radial part") {
    CHECK(coord_norm(tangent_project(sphere, p2, p2.coords()).vector()) <= 1e-15);
  }
  SUBCASE("fixes tangent vectors") {
    CHECK(coord_norm(tangent_project(sphere, p2, e(0)).vector() - e(0)) <= 1e-15);
  }
  SUBCASE("idempotent and orthogonal, randomized") {
    std::mt19937_64 rng(7u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
      const SpaceForm sf(trial % 2 == 0 ? 1.0 : -1.0);
      const ManifoldPoint p = random_point(sf, rng);
      Vec u(4);
      for (int i = 0; i < 4; ++i) {
        u[i] = gauss(rng);
      }
      const Vec once = tangent_project_raw(sf, p.coords(), u);
      const Vec twice = tangent_project_raw(sf, p.coords(), once);
      CHECK(coord_norm(twice - once) <= 1e-14 * std::max(1.0, coord_norm(u)));
      CHECK(std::abs(sf.inner(once, p.coords())) <= 1e-12 * std::max(1.0, coord_norm(u)));
    }
  }
}

TEST_CASE("orthonormal tangent basis") {
  for (double C : {1.0, -1.0}) {
    const SpaceForm sf(C);
    const ManifoldPoint p(sf, sf.R() * e(0));
    const auto basis = orthonormal_tangent_basis(sf, p);
    REQUIRE(basis.size() == 3);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      CHECK(std::abs(sf.inner(basis[i], basis[i]) - 1.0) <= 1e-12);
      CHECK(std::abs(sf.inner(basis[i], p.coords())) <= 1e-12);
      for (std::size_t j = i + 1; j < basis.size(); ++j) {
        CHECK(std::abs(sf.inner(basis[i], basis[j])) <= 1e-12);
      }
    }
  }
}

TEST_CASE("metric cross dual orientation") {
  for (double C : {1.0, -1.0}) {
    const SpaceForm sf(C);
    const Vec b = cross_dual(sf, sf.R() * e(0), e(1), e(2));
    CHECK(coord_norm(b - e(3)) <= 1e-14);
    CHECK(std::abs(sf.inner(b, b) - 1.0) <= 1e-14);
  }
}
