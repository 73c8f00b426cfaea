#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "aqec/core/layout.hpp"
#include "aqec/core/matrix.hpp"
#include "aqec/device/params.hpp"
#include "aqec/quantum/operators.hpp"

namespace aqec {

enum class Frame { lab, rotating };

// H = sum w_m n_m (lab frame only) + 1/2 sum_mn chi_mn a_m^dag a_n^dag a_m a_n.
// Two-level modes use a -> sigma_minus. The result is diagonal in Fock space.
inline Matrix build_static_hamiltonian(const DeviceParams& params,
                                       const HilbertLayout& layout,
                                       Frame frame = Frame::rotating) {
  const auto& modes = layout.modes();
  const std::size_t m = modes.size();
  std::vector<double> omega(m, 0.0);
  std::vector<std::vector<double>> chi(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    const auto& mp = params.mode(modes[i].name);
    if (frame == Frame::lab) omega[i] = mhz(mp.freq_mhz);
    for (std::size_t j = i; j < m; ++j) {
      chi[i][j] = chi[j][i] = params.chi(modes[i].name, modes[j].name);
    }
  }
  const auto n = static_cast<Eigen::Index>(layout.total_dim());
  Matrix h = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto d = layout.digits(static_cast<std::size_t>(k));
    double e = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double ni = d[i];
      e += omega[i] * ni + 0.5 * chi[i][i] * ni * (ni - 1.0);
      for (std::size_t j = i + 1; j < m; ++j) e += chi[i][j] * ni * d[j];
    }
    h(k, k) = e;
  }
  return h;
}

// I and Q drive operators for one mode: (a^dag + a) and i(a^dag - a).
// For two-level modes these are sigma_x and sigma_y.
inline std::pair<Matrix, Matrix> drive_operators(const HilbertLayout& layout,
                                                 const std::string& mode) {
  const Matrix a = mode_operator(layout, mode, ModeOp::lower());
  const Matrix ad = a.adjoint();
  return {ad + a, kI * (ad - a)};
}

}  // namespace aqec
