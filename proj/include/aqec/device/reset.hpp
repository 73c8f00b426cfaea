#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "aqec/core/layout.hpp"
#include "aqec/device/collapse.hpp"
#include "aqec/quantum/operators.hpp"

namespace aqec {

// Effective reset rate Omega^2 / gamma_R of an adiabatically eliminated
// Raman transition into a fast-decaying readout mode.
inline double raman_reset_rate(double omega_raman, double gamma_r) {
  if (!(gamma_r > 0.0)) {
    throw std::invalid_argument("raman_reset_rate: gamma_R must be positive");
  }
  return omega_raman * omega_raman / gamma_r;
}

inline double raman_omega_for_lifetime(double lifetime_us, double gamma_r) {
  if (!(lifetime_us > 0.0) || !(gamma_r > 0.0)) {
    throw std::invalid_argument("raman_omega_for_lifetime: inputs must be positive");
  }
  return std::sqrt(gamma_r / lifetime_us);
}

enum class ResetTarget { qubit, cavity };

// Qubit reset dumps |e> -> |g>; cavity reset uses the annihilation operator.
inline CollapseSet raman_reset_collapse(const HilbertLayout& layout,
                                        const std::string& mode, ResetTarget target,
                                        double omega_raman, double gamma_r) {
  const double rate = raman_reset_rate(omega_raman, gamma_r);
  const int dim = layout.dim_of(mode);
  Matrix local = Matrix::Zero(dim, dim);
  if (target == ResetTarget::qubit) {
    local(0, 1) = 1.0;
  } else {
    local = lowering(dim);
  }
  CollapseSet set;
  set.add(mode + ":reset", embed(layout, mode, local), rate);
  return set;
}

}  // namespace aqec
