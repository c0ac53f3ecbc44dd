#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tokbench {

struct LbfgsOptions {
  std::size_t history = 10;
  std::size_t max_iter = 200;
  double tol = 1e-6;  // on the infinity norm of the gradient
  double c1 = 1e-4;   // sufficient decrease
  double c2 = 0.9;    // curvature (strong Wolfe)
  std::size_t max_line_search = 40;
};

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  double grad_inf_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::string stop_reason;
  std::vector<double> trace;  // objective at the start and after each accepted step
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double inf_norm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

/// Minimizer of the cubic through (a, fa, ga) and (b, fb, gb), or NaN.
inline double cubic_min(double a, double fa, double ga, double b, double fb, double gb) {
  const double d1 = ga + gb - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - ga * gb;
  if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double d2 = std::copysign(std::sqrt(disc), b - a);
  return b - (b - a) * (gb + d2 - d1) / (gb - ga + 2.0 * d2);
}

}  // namespace detail

/// Limited-memory BFGS with a strong-Wolfe line search (bracketing + zoom
/// with safeguarded cubic interpolation). `fn(x, grad)` returns f(x) and
/// writes the gradient. Deterministic: no randomness anywhere.
template <typename Objective>
LbfgsResult lbfgs_minimize(Objective&& fn, std::vector<double> x0, const LbfgsOptions& opt = {}) {
  const std::size_t n = x0.size();
  LbfgsResult res;
  res.x = std::move(x0);
  std::vector<double> g(n), d(n), xt(n), gt(n);
  double f = fn(std::span<const double>(res.x), std::span<double>(g));
  res.trace.push_back(f);

  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> alpha_buf(opt.history);

  for (;;) {
    res.value = f;
    res.grad_inf_norm = detail::inf_norm(g);
    if (res.grad_inf_norm <= opt.tol) {
      res.converged = true;
      res.stop_reason = "gradient tolerance reached";
      return res;
    }
    if (res.iterations >= opt.max_iter) {
      res.stop_reason = "maximum iterations reached";
      return res;
    }

    // Two-loop recursion: d = -H g.
    for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
    const std::size_t m = s_hist.size();
    for (std::size_t k = m; k-- > 0;) {
      alpha_buf[k] = rho_hist[k] * detail::dot(s_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha_buf[k] * y_hist[k][i];
    }
    if (m > 0) {
      const double gamma = detail::dot(s_hist.back(), y_hist.back()) / detail::dot(y_hist.back(), y_hist.back());
      for (double& v : d) v *= gamma;
    }
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = rho_hist[k] * detail::dot(y_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] += s_hist[k][i] * (alpha_buf[k] - beta);
    }
    double dphi0 = detail::dot(g, d);
    if (!(dphi0 < 0.0)) {
      // Not a descent direction: restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      dphi0 = detail::dot(g, d);
    }

    // Strong-Wolfe line search on phi(a) = f(x + a d).
    struct Point {
      double a, f, dphi;
      std::vector<double> grad;
    };
    auto eval = [&](double a) {
      for (std::size_t i = 0; i < n; ++i) xt[i] = res.x[i] + a * d[i];
      Point p{a, fn(std::span<const double>(xt), std::span<double>(gt)), 0.0, {}};
      p.dphi = detail::dot(gt, d);
      p.grad = gt;
      return p;
    };
    const double phi0 = f;
    // Near the optimum f-differences drown in rounding (|f| * eps); there the
    // derivative-based approximate Wolfe test stands in for Armijo, still
    // never accepting an increase.
    const double noise = 1e-12 * std::max(1.0, std::abs(phi0));
    auto armijo = [&](const Point& p) {
      if (p.f <= phi0 + opt.c1 * p.a * dphi0) return true;
      return p.f <= phi0 && phi0 - p.f <= noise && p.dphi <= (2.0 * opt.c1 - 1.0) * dphi0;
    };
    auto curvature = [&](const Point& p) { return std::abs(p.dphi) <= -opt.c2 * dphi0; };

    double a_init = 1.0;
    if (m == 0) a_init = std::min(1.0, 1.0 / std::sqrt(detail::dot(g, g)));

    std::optional<Point> accepted;
    Point prev{0.0, phi0, dphi0, g};
    auto zoom = [&](Point lo, Point hi) -> std::optional<Point> {
      for (std::size_t it = 0; it < opt.max_line_search; ++it) {
        const double width = hi.a - lo.a;
        double a = detail::cubic_min(lo.a, lo.f, lo.dphi, hi.a, hi.f, hi.dphi);
        const double left = std::min(lo.a, hi.a) + 0.1 * std::abs(width);
        const double right = std::max(lo.a, hi.a) - 0.1 * std::abs(width);
        if (!std::isfinite(a) || a < left || a > right) a = 0.5 * (lo.a + hi.a);
        if (std::abs(width) < 1e-16 * std::max(1.0, std::abs(lo.a))) break;
        Point p = eval(a);
        // strict: an equal f (flat at resolution) is bracketed by its slope below
        if (!armijo(p) || p.f > lo.f) {
          hi = std::move(p);
        } else {
          if (curvature(p)) return p;
          if (p.dphi * (hi.a - lo.a) >= 0.0) hi = lo;
          lo = std::move(p);
        }
      }
      // Fall back to the best sufficient-decrease point found, if any.
      if (lo.a > 0.0 && lo.f < phi0) return lo;
      return std::nullopt;
    };

    double a = a_init;
    for (std::size_t it = 0; it < opt.max_line_search; ++it) {
      Point p = eval(a);
      if (!std::isfinite(p.f) || !armijo(p) || (it > 0 && p.f > prev.f)) {
        accepted = zoom(prev, std::move(p));
        break;
      }
      if (curvature(p)) {
        accepted = std::move(p);
        break;
      }
      if (p.dphi >= 0.0) {
        accepted = zoom(p, prev);
        break;
      }
      prev = std::move(p);
      a *= 2.0;
    }
    if (!accepted) {
      res.stop_reason = "line search failed";
      return res;
    }

    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = accepted->a * d[i];
      y[i] = accepted->grad[i] - g[i];
      res.x[i] += s[i];
    }
    g = std::move(accepted->grad);
    f = accepted->f;
    ++res.iterations;
    res.trace.push_back(f);

    const double sy = detail::dot(s, y);
    if (sy > 1e-10 * detail::dot(y, y)) {
      if (s_hist.size() == opt.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
  }
}

}  // namespace tokbench
