#pragma once

#include "sfgeo/ambient.hpp"

#include <functional>
#include <vector>

namespace sfgeo {

/// Fixed-step initial value problem y' = rhs(s, y) on [s_start, s_end].
struct OdeProblem {
  int state_dim;
  std::function<Vec(double, const Vec&)> rhs;
  double s_start;
  double s_end;
  double step;
  Vec y0;
};

/// Solution samples on a uniform grid whose last point is exactly s_end.
struct Trajectory {
  std::vector<double> s;
  std::vector<Vec> states;

  std::size_t size() const { return s.size(); }
  double step() const { return s.size() > 1 ? s[1] - s[0] : 0.0; }
};

/// Hook applied after every accepted step (frame renormalization etc.).
using StepObserver = std::function<void(double, Vec&)>;

/// Classical RK4 with a fixed step. The requested step is shrunk to the
/// nearest uniform subdivision of the interval, so the grid is uniform and
/// lands on s_end exactly. Integrates backward when s_end < s_start.
Trajectory integrate(const OdeProblem& problem);
Trajectory integrate(const OdeProblem& problem, const StepObserver& post_step);

/// Sampled derivative of order 1 or 2 on a uniform grid of spacing h:
/// central differences in the interior, one-sided second-order stencils at
/// the two ends. Requires at least 5 samples.
std::vector<double> fd_derivative(const std::vector<double>& samples, double h, int order);

/// fd_derivative applied per coordinate to a sampled vector column.
std::vector<Vec> fd_derivative(const std::vector<Vec>& samples, double h, int order);

/// Replaces the first and last n_patch samples by a least-squares polynomial
/// extrapolation fitted to the adjacent interior samples. Repeated one-sided
/// differencing at the grid ends amplifies the mismatch between the end and
/// interior truncation errors; rebuilding the ends from the clean interior
/// keeps cascaded derivatives second-order accurate up to the boundary. The
/// fit (rather than interpolation) keeps the roundoff noise floor of deeply
/// cascaded columns from being amplified by large extrapolation weights.
void extrapolate_boundary(std::vector<double>& col, int n_patch = 3, int degree = 3,
                          int n_nodes = 12);
void extrapolate_boundary(std::vector<Vec>& col, int n_patch = 3, int degree = 3,
                          int n_nodes = 12);

/// Cubic interpolating spline with not-a-knot end conditions (natural for
/// fewer than four knots). Knots must be strictly increasing; evaluation
/// outside the knot range extends the end cubics.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double eval(double t) const;
  double deriv(double t) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::size_t locate(double t) const;

  std::vector<double> x_, y_, m_;  // m_: second derivatives at the knots
};

}  // namespace sfgeo
