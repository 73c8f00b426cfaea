#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace aqec {

// Populations of the code, error and uncorrectable subspaces.
struct RateState {
  double p_c = 1.0;
  double p_e = 0.0;
  double p_u = 0.0;

  double total() const { return p_c + p_e + p_u; }
};

struct RateParams {
  double gamma_c = 0.0;  // 1/us
  double gamma_e = 0.0;  // 1/us
  double f_success = 1.0;
  double tau = 0.0;  // us

  void validate() const {
    if (!(gamma_c >= 0.0) || !(gamma_e >= 0.0)) {
      throw std::invalid_argument("RateParams: rates must be non-negative");
    }
    if (!(f_success >= 0.0 && f_success <= 1.0)) {
      throw std::invalid_argument("RateParams: f_success outside [0, 1]");
    }
  }
};

// Code and error rates 2/T1 from the cavity lifetime.
inline RateParams rate_params_from_t1(double t1_us, double f_success, double tau) {
  return {2.0 / t1_us, 2.0 / t1_us, f_success, tau};
}

enum class RateOrder { exact, second };

// P_u is always filled from normalization so the sum stays exact.
inline RateState evolve_rates(const RateState& s, const RateParams& p, RateOrder order) {
  p.validate();
  const double gc = p.gamma_c, ge = p.gamma_e, t = p.tau;
  RateState out;
  if (order == RateOrder::second) {
    out.p_c = s.p_c * (1.0 - gc * t + gc * gc * t * t / 2.0);
    out.p_e = s.p_e * (1.0 - ge * t + ge * ge * t * t / 2.0) +
              gc * t * s.p_c * (1.0 - (gc + ge) / 2.0 * t);
  } else {
    const double ec = std::exp(-gc * t), ee = std::exp(-ge * t);
    out.p_c = s.p_c * ec;
    // Code-to-error transfer, degenerate-rate limit handled explicitly.
    const double transfer = std::abs(ge - gc) < 1e-15 * std::max(1.0, gc)
                                ? gc * t * ec
                                : gc / (ge - gc) * (ec - ee);
    out.p_e = s.p_e * ee + s.p_c * transfer;
  }
  out.p_u = 1.0 - out.p_c - out.p_e;
  return out;
}

inline RateState apply_correction(const RateState& s, double f_success) {
  if (!(f_success >= 0.0 && f_success <= 1.0)) {
    throw std::invalid_argument("apply_correction: f_success outside [0, 1]");
  }
  RateState out;
  const double good = s.p_c + s.p_e;
  out.p_c = f_success * good;
  out.p_e = 0.0;
  out.p_u = 1.0 - out.p_c;
  return out;
}

enum class EpsilonConvention { log, linear };

// eps = 1 - F (default) or -ln F, which the linear form approximates for small eps.
inline double epsilon_from_fidelity(double f, EpsilonConvention c = EpsilonConvention::linear) {
  if (!(f > 0.0 && f <= 1.0)) {
    throw std::invalid_argument("epsilon_from_fidelity: F outside (0, 1]");
  }
  return c == EpsilonConvention::log ? -std::log(f) : 1.0 - f;
}

// eps / tau + gamma_c gamma_e tau / 2.
inline double effective_decay_rate(double epsilon, double gamma_c, double gamma_e,
                                   double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("effective_decay_rate: tau must be positive");
  return epsilon / tau + gamma_c * gamma_e * tau / 2.0;
}

inline double effective_decay_rate(const RateParams& p,
                                   EpsilonConvention c = EpsilonConvention::linear) {
  return effective_decay_rate(epsilon_from_fidelity(p.f_success, c), p.gamma_c,
                              p.gamma_e, p.tau);
}

inline double optimal_interval(double epsilon, double gamma_c, double gamma_e) {
  if (!(gamma_c > 0.0) || !(gamma_e > 0.0)) {
    throw std::invalid_argument("optimal_interval: rates must be positive");
  }
  if (epsilon < 0.0) throw std::invalid_argument("optimal_interval: epsilon < 0");
  return std::sqrt(2.0 * epsilon / (gamma_c * gamma_e));
}

// Decay rate of P_c under repeated (evolve, correct) cycles, measured from
// the per-cycle ratio after `cycles` iterations.
inline double empirical_decay_rate(const RateParams& p, RateOrder order, int cycles = 20) {
  if (cycles < 2) throw std::invalid_argument("empirical_decay_rate: cycles < 2");
  RateState s;
  double prev = s.p_c, ratio = 1.0;
  for (int i = 0; i < cycles; ++i) {
    s = apply_correction(evolve_rates(s, p, order), p.f_success);
    ratio = s.p_c / prev;
    prev = s.p_c;
  }
  return -std::log(ratio) / p.tau;
}

}  // namespace aqec
