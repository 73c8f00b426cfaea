#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "aqec/core/matrix.hpp"

namespace aqec {

// f(x, grad) returns the value and fills grad.
using ObjectiveFn = std::function<double(const RealVector&, RealVector&)>;

struct LbfgsOptions {
  int max_iters = 500;
  int memory = 10;
  double grad_tol = 1e-9;          // on the infinity norm
  double rel_f_tol = 1e-13;        // stalls below this relative decrease
  int max_line_evals = 30;
  std::function<bool(double f)> stop;  // early exit once true
};

struct LbfgsResult {
  RealVector x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string message;
  std::vector<double> history;  // f after each accepted step, starting with f(x0)
};

namespace detail {

inline double cubic_min(double a, double fa, double ga, double b, double fb, double gb) {
  const double d1 = ga + gb - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - ga * gb;
  if (disc < 0.0) return 0.5 * (a + b);
  const double d2 = std::copysign(std::sqrt(disc), b - a);
  const double t = b - (b - a) * (gb + d2 - d1) / (gb - ga + 2.0 * d2);
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double margin = 0.1 * (hi - lo);
  if (!std::isfinite(t) || t < lo + margin || t > hi - margin) return 0.5 * (a + b);
  return t;
}

}  // namespace detail

// Limited-memory BFGS with a strong-Wolfe line search (c1 = 1e-4, c2 = 0.9).
inline LbfgsResult lbfgs_minimize(const ObjectiveFn& fn, RealVector x0,
                                  const LbfgsOptions& opt = {}) {
  constexpr double c1 = 1e-4, c2 = 0.9;
  LbfgsResult res;
  res.x = std::move(x0);
  RealVector g(res.x.size());
  res.f = fn(res.x, g);
  ++res.evaluations;
  res.history.push_back(res.f);
  std::deque<RealVector> s_hist, y_hist;
  std::deque<double> rho_hist;

  auto finish = [&](bool ok, std::string msg) {
    res.converged = ok;
    res.message = std::move(msg);
    return res;
  };

  for (res.iterations = 0; res.iterations < opt.max_iters; ++res.iterations) {
    if (opt.stop && opt.stop(res.f)) return finish(true, "target reached");
    if (g.lpNorm<Eigen::Infinity>() < opt.grad_tol) return finish(true, "gradient tolerance");

    // Two-loop recursion.
    RealVector q = g;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(q);
      q -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(q);
      q += (alpha[k] - beta) * s_hist[k];
    }
    RealVector dir = -q;
    double dg0 = dir.dot(g);
    if (!(dg0 < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      dir = -g;
      dg0 = -g.squaredNorm();
    }

    // Strong-Wolfe bracketing and zoom.
    const double f0 = res.f;
    double step = s_hist.empty() ? std::min(1.0, 1.0 / g.lpNorm<Eigen::Infinity>()) : 1.0;
    double a_prev = 0.0, f_prev = f0, d_prev = dg0;
    double a_lo = 0.0, f_lo = f0, d_lo = dg0, a_hi = 0.0, f_hi = 0.0, d_hi = 0.0;
    bool bracketed = false, accepted = false;
    RealVector x_new, g_new(g.size());
    double f_new = 0.0;
    auto trial = [&](double a) {
      x_new = res.x + a * dir;
      f_new = fn(x_new, g_new);
      ++res.evaluations;
      return g_new.dot(dir);
    };
    int evals = 0;
    for (; evals < opt.max_line_evals; ++evals) {
      const double d = trial(step);
      if (!std::isfinite(f_new) || f_new > f0 + c1 * step * dg0 ||
          (evals > 0 && f_new >= f_prev)) {
        a_lo = a_prev; f_lo = f_prev; d_lo = d_prev;
        a_hi = step; f_hi = std::isfinite(f_new) ? f_new : std::numeric_limits<double>::max();
        d_hi = std::isfinite(d) ? d : 0.0;
        bracketed = true;
        break;
      }
      if (std::abs(d) <= -c2 * dg0) { accepted = true; break; }
      if (d >= 0.0) {
        a_lo = step; f_lo = f_new; d_lo = d;
        a_hi = a_prev; f_hi = f_prev; d_hi = d_prev;
        bracketed = true;
        break;
      }
      a_prev = step; f_prev = f_new; d_prev = d;
      step *= 2.0;
    }
    if (bracketed) {
      for (; evals < opt.max_line_evals; ++evals) {
        const double a = f_hi == std::numeric_limits<double>::max()
                             ? 0.5 * (a_lo + a_hi)
                             : detail::cubic_min(a_lo, f_lo, d_lo, a_hi, f_hi, d_hi);
        const double d = trial(a);
        if (!std::isfinite(f_new) || f_new > f0 + c1 * a * dg0 || f_new >= f_lo) {
          a_hi = a; f_hi = std::isfinite(f_new) ? f_new : std::numeric_limits<double>::max();
          d_hi = std::isfinite(d) ? d : 0.0;
        } else {
          if (std::abs(d) <= -c2 * dg0) { accepted = true; break; }
          if (d * (a_hi - a_lo) >= 0.0) { a_hi = a_lo; f_hi = f_lo; d_hi = d_lo; }
          a_lo = a; f_lo = f_new; d_lo = d;
        }
        if (std::abs(a_hi - a_lo) < 1e-16 * std::max(1.0, std::abs(a_lo))) break;
      }
      if (!accepted && a_lo > 0.0 && f_lo < f0) {
        // Accept the best sufficient-decrease point found.
        trial(a_lo);
        accepted = true;
      }
    }
    if (!accepted) return finish(false, "line search failed");

    const RealVector s = x_new - res.x;
    const RealVector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opt.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double prev = res.f;
    res.x = x_new;
    g = g_new;
    res.f = f_new;
    res.history.push_back(res.f);
    if (prev - res.f <= opt.rel_f_tol * std::max({1.0, std::abs(prev), std::abs(res.f)})) {
      ++res.iterations;
      return finish(opt.stop ? opt.stop(res.f) : true, "relative decrease below tolerance");
    }
  }
  if (opt.stop && opt.stop(res.f)) return finish(true, "target reached");
  return finish(false, "iteration limit reached");
}

}  // namespace aqec
