#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aqec/codes/deformed.hpp"
#include "aqec/core/layout.hpp"
#include "aqec/core/matrix.hpp"
#include "aqec/device/collapse.hpp"
#include "aqec/device/params.hpp"
#include "aqec/device/pass.hpp"
#include "aqec/protocol/lindblad.hpp"
#include "aqec/quantum/operators.hpp"

namespace aqec {

// Storage cavity between recovery gates: diagonal spectrum (rad/us, rotating
// frame) plus loss, heating and pure dephasing.
struct FreeEvolutionModel {
  int dim = 8;
  double kappa = 1.0 / 1380.0;  // 1/us
  double n_th = 0.0;
  double dephasing = 0.0;       // rate of the D[n] term, 1/us
  std::vector<double> spectrum;  // E_n for n = 0..dim-1

  void validate() const {
    if (dim < 5) throw std::invalid_argument("FreeEvolutionModel: dim must be >= 5");
    if (static_cast<int>(spectrum.size()) != dim) {
      throw std::invalid_argument("FreeEvolutionModel: spectrum length differs from dim");
    }
    if (!(kappa >= 0.0) || !(n_th >= 0.0) || !(dephasing >= 0.0)) {
      throw std::invalid_argument("FreeEvolutionModel: negative rate");
    }
  }

  Matrix hamiltonian() const {
    Matrix h = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) h(n, n) = spectrum[static_cast<std::size_t>(n)];
    return h;
  }

  CollapseSet collapse() const {
    const Matrix a = lowering(dim);
    CollapseSet c;
    c.add("loss", a, (1.0 + n_th) * kappa);
    c.add("heating", a.adjoint(), n_th * kappa);
    c.add("dephasing", a.adjoint() * a, dephasing);
    return c;
  }

  Matrix superoperator(double t) const {
    validate();
    return lindblad_superoperator(hamiltonian(), collapse(), t);
  }

  DeformedFrame frame(double t) const {
    return frame_from_spectrum(t, kappa, spectrum);
  }
};

inline std::vector<double> kerr_spectrum(int dim, double kerr) {
  std::vector<double> s(static_cast<std::size_t>(dim));
  for (int n = 0; n < dim; ++n) s[static_cast<std::size_t>(n)] = -0.5 * kerr * n * (n - 1.0);
  return s;
}

inline std::vector<double> pass_spectrum(int dim, const PassWorkingPoint& wp, double chi,
                                         double kerr) {
  std::vector<double> s(static_cast<std::size_t>(dim));
  for (int n = 0; n < dim; ++n) {
    s[static_cast<std::size_t>(n)] = pass_level_shift(n, wp.delta, wp.omega, chi, kerr);
  }
  return s;
}

struct FreeModelOptions {
  bool pass_enabled = true;
  int dim = 8;
  bool heating = true;
  bool dephasing = false;  // cavity pure dephasing from T2; off in the budget model
  std::string qubit = "I1";
  std::string cavity = "S1";
};

// Cavity model from a device profile. chi and K enter the PASS formulas as
// positive magnitudes of the (negative) dispersive and self-Kerr entries.
inline FreeEvolutionModel free_model_from_profile(const DeviceParams& p,
                                                  const FreeModelOptions& opt = {}) {
  const ModeParams& cav = p.mode(opt.cavity);
  if (!cav.t1_us) throw std::invalid_argument("cavity '" + opt.cavity + "' has no T1");
  FreeEvolutionModel m;
  m.dim = opt.dim;
  m.kappa = 1.0 / *cav.t1_us;
  m.n_th = opt.heating ? cav.n_th : 0.0;
  m.dephasing = opt.dephasing ? 2.0 * pure_dephasing_rate(cav) : 0.0;
  const double kerr = -p.chi(opt.cavity, opt.cavity);
  if (opt.pass_enabled) {
    const double chi = -p.chi(opt.qubit, opt.cavity);
    m.spectrum = pass_spectrum(opt.dim, optimize_pass(chi, kerr), chi, kerr);
  } else {
    m.spectrum = kerr_spectrum(opt.dim, kerr);
  }
  m.validate();
  return m;
}

}  // namespace aqec
