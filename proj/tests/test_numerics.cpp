#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sfgeo/numerics.hpp"

#include <cmath>
#include <numbers>

using namespace sfgeo;

namespace {

OdeProblem scalar_problem(std::function<double(double, double)> f, double y0, double s0, double s1,
                          double step) {
  OdeProblem p;
  p.state_dim = 1;
  p.rhs = [f = std::move(f)](double s, const Vec& y) {
    Vec dy(1);
    dy[0] = f(s, y[0]);
    return dy;
  };
  p.s_start = s0;
  p.s_end = s1;
  p.step = step;
  p.y0 = Vec::Constant(1, y0);
  return p;
}

double exp_error(double step) {
  const Trajectory t =
      integrate(scalar_problem([](double, double y) { return y; }, 1.0, 0.0, 1.0, step));
  return std::abs(t.states.back()[0] - std::exp(1.0));
}

}  // namespace

TEST_CASE("constant rhs stays constant") {
  const Trajectory t =
      integrate(scalar_problem([](double, double) { return 0.0; }, 3.5, 0.0, 2.0, 1e-2));
  for (const Vec& y : t.states) {
    CHECK(y[0] == 3.5);
  }
}

TEST_CASE("exponential growth hits e") {
  CHECK(exp_error(1e-3) <= 1e-10);
}

TEST_CASE("grid is uniform and lands on the endpoint") {
  const Trajectory t =
      integrate(scalar_problem([](double, double) { return 1.0; }, 0.0, 0.0, 1.0, 3e-4));
  CHECK(t.s.back() == 1.0);
  const double h = t.s[1] - t.s[0];
  CHECK(h <= 3e-4 + 1e-15);
  for (std::size_t i = 1; i < t.size(); ++i) {
    CHECK(std::abs((t.s[i] - t.s[i - 1]) - h) <= 1e-14);
  }
}

TEST_CASE("circle system conserves the radius") {
  OdeProblem p;
  p.state_dim = 2;
  p.rhs = [](double, const Vec& y) {
    Vec dy(2);
    dy[0] = -y[1];
    dy[1] = y[0];
    return dy;
  };
  p.s_start = 0.0;
  p.s_end = 2.0 * std::numbers::pi;
  p.step = 1e-3;
  p.y0 = Vec::Zero(2);
  p.y0[0] = 1.0;
  const Trajectory t = integrate(p);
  for (const Vec& y : t.states) {
    CHECK(std::abs(y.norm() - 1.0) <= 1e-9);
  }
}

TEST_CASE("rk4 order: halving the step cuts the error ~16x") {
  const double factor = exp_error(0.05) / exp_error(0.025);
  CHECK(factor >= 12.0);
  CHECK(factor <= 20.0);
}

TEST_CASE("non-finite states are reported with their location") {
  const OdeProblem p =
      scalar_problem([](double, double y) { return y * y; }, 1.0, 0.0, 2.0, 1e-3);
  CHECK_THROWS_AS(integrate(p), std::runtime_error);
}

TEST_CASE("step validation") {
  CHECK_THROWS_AS(integrate(scalar_problem([](double, double) { return 0.0; }, 0.0, 0.0, 0.5, 0.7)),
                  std::invalid_argument);
}

TEST_CASE("fd_derivative on closed forms") {
  const double h = 1e-3;
  const std::size_t n = 2001;
  std::vector<double> sin_col(n), sq_col(n), const_col(n, 4.2);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) * h;
    sin_col[i] = std::sin(s);
    sq_col[i] = s * s;
  }
  SUBCASE("constant column has zero derivative") {
    for (double v : fd_derivative(const_col, h, 1)) {
      CHECK(std::abs(v) <= 1e-12);
    }
  }
  SUBCASE("first derivative of sin is cos") {
    const auto d = fd_derivative(sin_col, h, 1);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(d[i] - std::cos(static_cast<double>(i) * h)) <= 1e-6);
    }
  }
  SUBCASE("second derivative of s^2 is 2") {
    for (double v : fd_derivative(sq_col, h, 2)) {
      CHECK(std::abs(v - 2.0) <= 1e-6);
    }
  }
  SUBCASE("too few samples") {
    CHECK_THROWS_AS(fd_derivative(std::vector<double>{1, 2, 3}, h, 1), std::invalid_argument);
  }
}

TEST_CASE("fd_derivative order: halving the spacing cuts the error ~4x") {
  auto worst = [](double h) {
    const std::size_t n = static_cast<std::size_t>(std::round(2.0 / h)) + 1;
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = std::sin(static_cast<double>(i) * h);
    }
    const auto d = fd_derivative(col, h, 1);
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w = std::max(w, std::abs(d[i] - std::cos(static_cast<double>(i) * h)));
    }
    return w;
  };
  const double factor = worst(1e-2) / worst(5e-3);
  CHECK(factor >= 3.0);
  CHECK(factor <= 5.0);
}

TEST_CASE("cubic spline reproduces smooth data") {
  const std::size_t n = 401;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = -1.0 + 2.0 * static_cast<double>(i) / (n - 1.0);
    y[i] = std::sin(2.0 * x[i]) + 0.3 * x[i];
  }
  const CubicSpline sp(x, y);
  for (double t : {-0.95, -0.31, 0.0, 0.47, 0.999}) {
    CHECK(std::abs(sp.eval(t) - (std::sin(2.0 * t) + 0.3 * t)) <= 1e-9);
    CHECK(std::abs(sp.deriv(t) - (2.0 * std::cos(2.0 * t) + 0.3)) <= 1e-6);
  }
  // knots are interpolated exactly
  CHECK(sp.eval(x[17]) == doctest::Approx(y[17]).epsilon(1e-14));
}
