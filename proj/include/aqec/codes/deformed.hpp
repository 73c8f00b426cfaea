#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "aqec/core/matrix.hpp"
#include "aqec/quantum/operators.hpp"

namespace aqec {

// Free-evolution frame seen by the recovery gate. Level frequencies are
// relative to the vacuum (rad/us, index = Fock level); swap phases are the
// phases the excitation transfer imprints on |n> for an ancilla initially in
// |g> or |e>.
struct DeformedFrame {
  double t_fe = 0.0;
  double kappa = 0.0;
  std::array<double, 5> omega{};
  std::array<double, 5> phi_g{};
  std::array<double, 5> phi_e{};

  void validate() const {
    auto finite = [](const std::array<double, 5>& a) {
      for (double v : a) {
        if (!std::isfinite(v)) return false;
      }
      return true;
    };
    if (!std::isfinite(t_fe) || !std::isfinite(kappa) || !finite(omega) ||
        !finite(phi_g) || !finite(phi_e)) {
      throw std::invalid_argument("DeformedFrame: non-finite entry");
    }
  }
};

// Frame from a full level spectrum E_n (rad/us); entries are shifted so
// that the vacuum has zero frequency.
inline DeformedFrame frame_from_spectrum(double t_fe, double kappa,
                                         const std::vector<double>& spectrum) {
  if (spectrum.size() < 5) {
    throw std::invalid_argument("frame_from_spectrum: need levels 0..4");
  }
  DeformedFrame f;
  f.t_fe = t_fe;
  f.kappa = kappa;
  for (int n = 0; n < 5; ++n) f.omega[n] = spectrum[n] - spectrum[0];
  return f;
}

struct DeformedStates {
  Vector zero_l1, one_l1, zero_e1, one_e1;
  Vector dual1, dual2;
  Vector zero_l2, one_l2, zero_l2s, one_l2s;
};

inline DeformedStates deformed_states(const DeformedFrame& f, int dim = 8) {
  f.validate();
  if (dim < 5) throw std::invalid_argument("deformed_states: needs at least 5 levels");
  const double t = f.t_fe;
  const double damp = std::exp(-2.0 * f.kappa * t);
  const double norm = 1.0 / std::sqrt(1.0 + std::exp(-4.0 * f.kappa * t));
  const double s = 1.0 / std::sqrt(2.0);
  auto ph = [](double angle) { return std::exp(-kI * angle); };
  const Vector k0 = fock(dim, 0), k1 = fock(dim, 1), k2 = fock(dim, 2),
               k3 = fock(dim, 3), k4 = fock(dim, 4);
  DeformedStates d;
  d.zero_l1 = norm * (k0 + damp * ph(f.omega[4] * t) * k4);
  d.one_l1 = ph(f.omega[2] * t) * k2;
  d.zero_e1 = ph(f.omega[3] * t) * k3;
  d.one_e1 = ph(f.omega[1] * t) * k1;
  d.dual1 = norm * (damp * k0 - ph(f.omega[4] * t) * k4);
  d.dual2 = s * (k0 - ph(f.phi_g[4]) * k4);
  d.zero_l2 = s * (k0 + ph(f.phi_g[4]) * k4);
  d.one_l2 = ph(f.phi_g[2]) * k2;
  d.zero_l2s = s * (k0 + ph(f.phi_e[4]) * k4);
  d.one_l2s = ph(f.phi_e[2]) * k2;
  return d;
}

}  // namespace aqec
