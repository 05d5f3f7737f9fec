#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sfgeo/checks.hpp"
#include "sfgeo/concircular.hpp"

#include <cmath>

using namespace sfgeo;

namespace {
Vec e(int i) { return Vec::Unit(4, i); }
}  // namespace

TEST_CASE("field evaluation closed forms") {
  const SpaceForm sphere(1.0);
  SUBCASE("p0 aligned with the point: V = 0, mu = -1") {
    const ConcircularField f(sphere, e(0));
    const auto [V, mu] = eval(f, ManifoldPoint(sphere, e(0)));
    CHECK(coord_norm(V.vector()) <= 1e-15);
    CHECK(mu == -1.0);
  }
  SUBCASE("orthogonal point: V = p0, mu = 0") {
    const ConcircularField f(sphere, e(0));
    const auto [V, mu] = eval(f, ManifoldPoint(sphere, e(1)));
    CHECK(coord_norm(V.vector() - e(0)) <= 1e-15);
    CHECK(mu == 0.0);
  }
  SUBCASE("hyperbolic orthogonal case") {
    const SpaceForm hyp(-1.0);
    const ConcircularField f(hyp, e(1));
    const auto [V, mu] = eval(f, ManifoldPoint(hyp, e(0)));
    CHECK(coord_norm(V.vector() - e(1)) <= 1e-15);
    CHECK(mu == 0.0);
  }
}

TEST_CASE("concircularity defect: fields pass, the control fails") {
  corpus::Rng rng(42u);
  double worst = 0.0;
  int control_hits = 0;
  const int n = 400;
  for (int i = 0; i < n; ++i) {
    const SpaceForm sf = corpus::random_space_form(rng);
    const ConcircularField field = corpus::random_field(sf, rng);
    const ManifoldPoint p = corpus::random_point(sf, rng);
    const TangentVector x = corpus::random_unit_tangent(sf, p, rng);
    worst = std::max(worst, concircularity_defect(field, p, x, 1e-4));
    const double control = concircularity_defect_generic(
        sf, [&](const ManifoldPoint& q) { return corpus::negative_control_field(sf, q); }, p, x,
        1e-4);
    if (control > 1e-2) {
      ++control_hits;
    }
  }
  CHECK(worst <= 1e-6);
  CHECK(control_hits >= static_cast<int>(0.95 * n));
}

TEST_CASE("zero field has zero defect and zero factor") {
  const SpaceForm sf(1.0);
  const ConcircularField zero(sf, Vec::Zero(4));
  const ManifoldPoint p(sf, e(2));
  const TangentVector x(p, e(1));
  CHECK(zero.mu(p) == 0.0);
  CHECK(concircularity_defect(zero, p, x) == 0.0);
}

TEST_CASE("gradient identity -C V = grad mu") {
  corpus::Rng rng(43u);
  double worst = 0.0;
  for (int i = 0; i < 400; ++i) {
    const SpaceForm sf = corpus::random_space_form(rng);
    const ConcircularField field = corpus::random_field(sf, rng);
    const ManifoldPoint p = corpus::random_point(sf, rng);
    worst = std::max(worst, grad_mu_defect(field, p, 1e-4));
  }
  CHECK(worst <= 1e-6);

  SUBCASE("vanishing field point") {
    const SpaceForm sphere(1.0);
    const ConcircularField f(sphere, e(0));
    CHECK(grad_mu_defect(f, ManifoldPoint(sphere, e(0))) <= 1e-8);
  }
  SUBCASE("scaling p0 scales both sides") {
    const SpaceForm sphere(1.0);
    corpus::Rng rng2(5u);
    const ManifoldPoint p = corpus::random_point(sphere, rng2);
    const ConcircularField f1(sphere, 0.37 * e(1) + 0.8 * e(3));
    const ConcircularField f5(sphere, 5.0 * f1.p0());
    CHECK(grad_mu_defect(f5, p) <= 5e-6);
    CHECK(coord_norm(f5.value(p) - 5.0 * f1.value(p)) <= 1e-12);
  }
}

TEST_CASE("basis fields span and separate") {
  for (double C : {1.0, -1.0}) {
    const SpaceForm sf(C);
    const auto fields = basis_fields(sf);
    REQUIRE(fields.size() == 4);

    // linearity of the construction: field(e1) + field(e2) = field(e1 + e2)
    const ConcircularField sum(sf, e(0) + e(1));
    corpus::Rng rng(11u);
    for (int k = 0; k < 10; ++k) {
      const ManifoldPoint p = corpus::random_point(sf, rng);
      CHECK(coord_norm(fields[0].value(p) + fields[1].value(p) - sum.value(p)) <= 1e-12);
    }
  }
  // separation at a concrete point
  const SpaceForm sphere(1.0);
  const ManifoldPoint p3(sphere, e(2));
  const auto fields = basis_fields(sphere);
  CHECK(coord_norm(fields[0].value(p3) - fields[1].value(p3)) > 1.0);
}

TEST_CASE("factor computed two ways agrees") {
  corpus::Rng rng(44u);
  for (int i = 0; i < 200; ++i) {
    const SpaceForm sf = corpus::random_space_form(rng);
    const ConcircularField field = corpus::random_field(sf, rng);
    const ManifoldPoint p = corpus::random_point(sf, rng);
    const double mu1 = field.mu(p);
    const double mu2 = sf.C() * sf.inner(field.value(p) - field.p0(), p.coords());
    CHECK(std::abs(mu1 - mu2) <= 1e-12 * std::max(1.0, std::abs(mu1)));
  }
}

TEST_CASE("factor is nonconstant for nonzero fields") {
  corpus::Rng rng(45u);
  for (double C : {1.0, -1.0}) {
    const SpaceForm sf(C);
    const ConcircularField field = corpus::random_field(sf, rng);
    double lo = 1e30, hi = -1e30;
    for (int k = 0; k < 100; ++k) {
      const double mu = field.mu(corpus::random_point(sf, rng));
      lo = std::min(lo, mu);
      hi = std::max(hi, mu);
    }
    CHECK(hi - lo > 0.0);
  }
}

TEST_CASE("fields work in higher ambient dimensions") {
  // the field and ambient layers are dimension-generic; only the curve and
  // surface layers fix n = 3
  const SpaceForm s4(1.0, 5);
  const auto fields = basis_fields(s4);
  REQUIRE(fields.size() == 5);
  const ManifoldPoint p(s4, Vec::Unit(5, 2));
  const TangentVector x(p, Vec::Unit(5, 4));
  CHECK(concircularity_defect(fields[0], p, x) <= 1e-8);
  CHECK(grad_mu_defect(fields[0], p) <= 1e-8);

  const SpaceForm h4(-1.0, 5);
  const ManifoldPoint ph(h4, Vec::Unit(5, 0));
  const TangentVector xh(ph, Vec::Unit(5, 3));
  const ConcircularField fh(h4, 0.4 * Vec::Unit(5, 1) - 0.8 * Vec::Unit(5, 0));
  CHECK(concircularity_defect(fh, ph, xh) <= 1e-8);
  CHECK(grad_mu_defect(fh, ph) <= 1e-8);
}

TEST_CASE("uniqueness: agreement on generic samples pins p0") {
  corpus::Rng rng(46u);
  for (double C : {1.0, -1.0}) {
    const SpaceForm sf(C);
    // identical determining vectors agree everywhere
    const ConcircularField f = corpus::random_field(sf, rng);
    const ConcircularField g(sf, f.p0());
    for (int k = 0; k < 5; ++k) {
      const ManifoldPoint p = corpus::random_point(sf, rng);
      CHECK(coord_norm(f.value(p) - g.value(p)) <= 1e-14);
    }
    // distinct ones separate on at most n+1 generic samples
    for (int trial = 0; trial < 30; ++trial) {
      const ConcircularField f1 = corpus::random_field(sf, rng);
      const ConcircularField f2 = corpus::random_field(sf, rng);
      if (coord_norm(f1.p0() - f2.p0()) <= 1e-10) {
        continue;
      }
      double gap = 0.0;
      for (int k = 0; k < 5; ++k) {
        const ManifoldPoint p = corpus::random_point(sf, rng);
        gap = std::max(gap, coord_norm(f1.value(p) - f2.value(p)));
      }
      CHECK(gap > 1e-10);
    }
  }
}
