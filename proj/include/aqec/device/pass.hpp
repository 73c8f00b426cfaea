#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace aqec {

// PASS formulas take chi = -chi_I1S1 > 0 and K = -chi_S1S1 > 0 (rad/us).

inline double pass_denominator(int n, double delta, double chi) {
  const double den = delta - n * chi;
  if (std::abs(den) < 1e-6) {
    throw std::domain_error("PASS drive resonant with Fock level " + std::to_string(n));
  }
  return den;
}

// w_n = -Omega^2/(Delta - n chi) - (K/2) n (n - 1).
inline double pass_level_shift(int n, double delta, double omega, double chi,
                               double kerr) {
  const double stark = omega == 0.0 ? 0.0 : -omega * omega / pass_denominator(n, delta, chi);
  return stark - 0.5 * kerr * n * (n - 1.0);
}

inline double pass_excitation(int n, double delta, double omega, double chi) {
  if (omega == 0.0) return 0.0;
  const double den = pass_denominator(n, delta, chi);
  return omega * omega / (den * den);
}

// delta = (w4 - w3) - (w2 - w1).
inline double pass_transparency_mismatch(double delta, double omega, double chi,
                                         double kerr) {
  auto w = [&](int n) { return pass_level_shift(n, delta, omega, chi, kerr); };
  return (w(4) - w(3)) - (w(2) - w(1));
}

struct PassWorkingPoint {
  double delta = 0.0;           // formula convention, rad/us
  double omega = 0.0;           // rad/us
  double drive_detuning = 0.0;  // drive minus qubit frequency = -delta
  double omega_sq_over_chi_kerr = 0.0;
  double mean_excitation = 0.0;  // over n = 0..4
  double mismatch = 0.0;
  int iterations = 0;
};

namespace detail {

// Stark part of the mismatch per unit Omega^2, in units where chi = 1.
inline double pass_g(double x) {
  auto f = [&](int n) { return -1.0 / (x - n); };
  return (f(4) - f(3)) - (f(2) - f(1));
}

inline double pass_mean_inv_sq(double x) {
  double s = 0.0;
  for (int n = 0; n <= 4; ++n) s += 1.0 / ((x - n) * (x - n));
  return s / 5.0;
}

// Mean excitation per unit K/chi along the constraint Omega^2 = 2K / g.
inline double pass_cost(double x) {
  const double g = pass_g(x);
  if (!(g > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 / g * pass_mean_inv_sq(x);
}

}  // namespace detail

inline constexpr int kPassIterationCap = 500;

// Minimizes the mean PASS excitation over n = 0..4 on the constraint
// delta = 0. Dense scan of every resonance-free interval, then golden section.
inline PassWorkingPoint optimize_pass(double chi, double kerr) {
  if (!(chi > 0.0) || !(kerr > 0.0)) {
    throw std::invalid_argument("optimize_pass: chi and K must be positive");
  }
  constexpr double lo = -40.0, hi = 44.0, step = 1e-3, guard = 1e-4;
  double best_x = std::numeric_limits<double>::quiet_NaN();
  double best_c = std::numeric_limits<double>::infinity();
  for (double x = lo; x <= hi; x += step) {
    if (std::abs(x - std::round(x)) < guard && std::round(x) >= 0 && std::round(x) <= 4)
      continue;
    const double c = detail::pass_cost(x);
    if (c < best_c) {
      best_c = c;
      best_x = x;
    }
  }
  if (!std::isfinite(best_c)) {
    throw std::runtime_error("optimize_pass: no feasible working point");
  }
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_x - step, b = best_x + step;
  double c1 = b - phi * (b - a), c2 = a + phi * (b - a);
  double f1 = detail::pass_cost(c1), f2 = detail::pass_cost(c2);
  int it = 0;
  while (b - a > 1e-12 && it < kPassIterationCap) {
    if (f1 < f2) {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - phi * (b - a);
      f1 = detail::pass_cost(c1);
    } else {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + phi * (b - a);
      f2 = detail::pass_cost(c2);
    }
    ++it;
  }
  if (b - a > 1e-9) {
    throw std::runtime_error("optimize_pass: no convergence after " +
                             std::to_string(kPassIterationCap) + " iterations");
  }
  const double x = 0.5 * (a + b);
  PassWorkingPoint wp;
  wp.delta = x * chi;
  wp.omega_sq_over_chi_kerr = 2.0 / detail::pass_g(x);
  wp.omega = std::sqrt(wp.omega_sq_over_chi_kerr * chi * kerr);
  wp.drive_detuning = -wp.delta;
  double mean = 0.0;
  for (int n = 0; n <= 4; ++n) mean += pass_excitation(n, wp.delta, wp.omega, chi);
  wp.mean_excitation = mean / 5.0;
  wp.mismatch = pass_transparency_mismatch(wp.delta, wp.omega, chi, kerr);
  wp.iterations = it;
  return wp;
}

}  // namespace aqec
