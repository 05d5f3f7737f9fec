#include "sfgeo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sfgeo {

Trajectory integrate(const OdeProblem& problem) {
  return integrate(problem, StepObserver());
}

Trajectory integrate(const OdeProblem& problem, const StepObserver& post_step) {
  const double length = problem.s_end - problem.s_start;
  if (length == 0.0 || !std::isfinite(length)) {
    throw std::invalid_argument("integrate: empty or invalid interval");
  }
  if (!(problem.step > 0.0)) {
    throw std::invalid_argument("integrate: step must be positive");
  }
  if (std::abs(length) < problem.step * (1.0 - 1e-12)) {
    throw std::invalid_argument("integrate: step exceeds the interval length");
  }
  if (problem.y0.size() != problem.state_dim) {
    throw std::invalid_argument("integrate: initial state has the wrong dimension");
  }

  const auto n_steps =
      static_cast<std::size_t>(std::ceil(std::abs(length) / problem.step - 1e-9));
  const double h = length / static_cast<double>(n_steps);

  Trajectory out;
  out.s.reserve(n_steps + 1);
  out.states.reserve(n_steps + 1);
  Vec y = problem.y0;
  out.s.push_back(problem.s_start);
  out.states.push_back(y);

  for (std::size_t i = 0; i < n_steps; ++i) {
    const double s = problem.s_start + static_cast<double>(i) * h;
    const Vec k1 = problem.rhs(s, y);
    const Vec k2 = problem.rhs(s + 0.5 * h, y + 0.5 * h * k1);
    const Vec k3 = problem.rhs(s + 0.5 * h, y + 0.5 * h * k2);
    const Vec k4 = problem.rhs(s + h, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    double s_next = problem.s_start + static_cast<double>(i + 1) * h;
    if (i + 1 == n_steps) {
      s_next = problem.s_end;
    }
    if (!y.allFinite()) {
      throw std::runtime_error("integrate: non-finite state at s = " + std::to_string(s_next));
    }
    if (post_step) {
      post_step(s_next, y);
    }
    out.s.push_back(s_next);
    out.states.push_back(y);
  }
  return out;
}

std::vector<double> fd_derivative(const std::vector<double>& samples, double h, int order) {
  const std::size_t n = samples.size();
  if (n < 5) {
    throw std::invalid_argument("fd_derivative: need at least 5 samples");
  }
  if (order != 1 && order != 2) {
    throw std::invalid_argument("fd_derivative: order must be 1 or 2");
  }
  if (h == 0.0) {
    throw std::invalid_argument("fd_derivative: zero spacing");
  }
  std::vector<double> out(n);
  const auto& y = samples;
  if (order == 1) {
    out[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      out[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
    }
    out[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
  } else {
    const double h2 = h * h;
    out[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / h2;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      out[i] = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / h2;
    }
    out[n - 1] = (2.0 * y[n - 1] - 5.0 * y[n - 2] + 4.0 * y[n - 3] - y[n - 4]) / h2;
  }
  return out;
}

std::vector<Vec> fd_derivative(const std::vector<Vec>& samples, double h, int order) {
  const std::size_t n = samples.size();
  if (n < 5) {
    throw std::invalid_argument("fd_derivative: need at least 5 samples");
  }
  const Eigen::Index dim = samples.front().size();
  std::vector<Vec> out(n, Vec::Zero(dim));
  std::vector<double> column(n);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = samples[i][c];
    }
    const std::vector<double> dcol = fd_derivative(column, h, order);
    for (std::size_t i = 0; i < n; ++i) {
      out[i][c] = dcol[i];
    }
  }
  return out;
}

void extrapolate_boundary(std::vector<double>& col, int n_patch, int degree, int n_nodes) {
  const int n = static_cast<int>(col.size());
  if (n < 2 * (n_patch + n_nodes) || degree + 1 > n_nodes) {
    throw std::invalid_argument("extrapolate_boundary: column too short for the fit");
  }
  // least-squares weights: value at offset j of the polynomial fitted over
  // offsets n_patch .. n_patch + n_nodes - 1 (scaled to [0,1] for conditioning)
  Eigen::MatrixXd X(n_nodes, degree + 1);
  const double span = static_cast<double>(n_patch + n_nodes - 1);
  for (int k = 0; k < n_nodes; ++k) {
    const double x = static_cast<double>(n_patch + k) / span;
    double p = 1.0;
    for (int c = 0; c <= degree; ++c) {
      X(k, c) = p;
      p *= x;
    }
  }
  const Eigen::MatrixXd gram_inv_xt =
      (X.transpose() * X).ldlt().solve(X.transpose());  // (degree+1) x n_nodes
  for (int j = 0; j < n_patch; ++j) {
    Eigen::VectorXd phi(degree + 1);
    double p = 1.0;
    for (int c = 0; c <= degree; ++c) {
      phi(c) = p;
      p *= static_cast<double>(j) / span;
    }
    const Eigen::VectorXd w = gram_inv_xt.transpose() * phi;
    double left = 0.0, right = 0.0;
    for (int k = 0; k < n_nodes; ++k) {
      left += w(k) * col[n_patch + k];
      right += w(k) * col[n - 1 - (n_patch + k)];
    }
    col[j] = left;
    col[n - 1 - j] = right;
  }
}

void extrapolate_boundary(std::vector<Vec>& col, int n_patch, int degree, int n_nodes) {
  if (col.empty()) {
    return;
  }
  const Eigen::Index dim = col.front().size();
  std::vector<double> scalar(col.size());
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (std::size_t i = 0; i < col.size(); ++i) {
      scalar[i] = col[i][c];
    }
    extrapolate_boundary(scalar, n_patch, degree, n_nodes);
    for (std::size_t i = 0; i < col.size(); ++i) {
      col[i][c] = scalar[i];
    }
  }
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n != y_.size() || n < 2) {
    throw std::invalid_argument("CubicSpline: need matching x/y with at least 2 knots");
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(x_[i + 1] > x_[i])) {
      throw std::invalid_argument("CubicSpline: knots must be strictly increasing");
    }
  }
  m_.assign(n, 0.0);
  if (n < 4) {
    if (n == 3) {
      // single interior knot, natural ends
      const double h0 = x_[1] - x_[0], h1 = x_[2] - x_[1];
      const double rhs = (y_[2] - y_[1]) / h1 - (y_[1] - y_[0]) / h0;
      m_[1] = 3.0 * rhs / (h0 + h1);
    }
    return;
  }

  // Not-a-knot: eliminate m0 and m_{n-1} into the first and last interior rows,
  // then solve the tridiagonal system for m_1 .. m_{n-2} with the Thomas
  // algorithm.
  const std::size_t ni = n - 2;  // interior unknowns
  std::vector<double> lower(ni, 0.0), diag(ni, 0.0), upper(ni, 0.0), rhs(ni, 0.0);
  auto hof = [&](std::size_t i) { return x_[i + 1] - x_[i]; };
  for (std::size_t k = 0; k < ni; ++k) {
    const std::size_t i = k + 1;
    const double hm = hof(i - 1), hp = hof(i);
    lower[k] = hm / 6.0;
    diag[k] = (hm + hp) / 3.0;
    upper[k] = hp / 6.0;
    rhs[k] = (y_[i + 1] - y_[i]) / hp - (y_[i] - y_[i - 1]) / hm;
  }
  {  // left end: m0 = ((h0+h1) m1 - h0 m2) / h1
    const double h0 = hof(0), h1 = hof(1);
    diag[0] += lower[0] * (h0 + h1) / h1;
    upper[0] -= lower[0] * h0 / h1;
    lower[0] = 0.0;
  }
  {  // right end, mirrored
    const double hn = hof(n - 2), hn1 = hof(n - 3);
    diag[ni - 1] += upper[ni - 1] * (hn + hn1) / hn1;
    lower[ni - 1] -= upper[ni - 1] * hn / hn1;
    upper[ni - 1] = 0.0;
  }
  for (std::size_t k = 1; k < ni; ++k) {
    const double w = lower[k] / diag[k - 1];
    diag[k] -= w * upper[k - 1];
    rhs[k] -= w * rhs[k - 1];
  }
  std::vector<double> sol(ni);
  sol[ni - 1] = rhs[ni - 1] / diag[ni - 1];
  for (std::size_t k = ni - 1; k-- > 0;) {
    sol[k] = (rhs[k] - upper[k] * sol[k + 1]) / diag[k];
  }
  for (std::size_t k = 0; k < ni; ++k) {
    m_[k + 1] = sol[k];
  }
  const double h0 = hof(0), h1 = hof(1);
  m_[0] = ((h0 + h1) * m_[1] - h0 * m_[2]) / h1;
  const double hn = hof(n - 2), hn1 = hof(n - 3);
  m_[n - 1] = ((hn + hn1) * m_[n - 2] - hn * m_[n - 3]) / hn1;
}

std::size_t CubicSpline::locate(double t) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  const auto idx = static_cast<std::size_t>(std::distance(x_.begin(), it));
  if (idx == 0) {
    return 0;
  }
  return std::min(idx - 1, x_.size() - 2);
}

double CubicSpline::eval(double t) const {
  const std::size_t i = locate(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::deriv(double t) const {
  const std::size_t i = locate(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

}  // namespace sfgeo
