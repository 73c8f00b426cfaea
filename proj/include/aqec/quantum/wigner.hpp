#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqec/core/matrix.hpp"
#include "aqec/quantum/operators.hpp"

namespace aqec {

struct WignerOptions {
  // Extra Fock levels used while displacing; 0 picks a size from max |alpha|.
  int padding = 0;
  double leak_tol = 1e-3;
};

// W(alpha) = (2/pi) tr[D(alpha)^dag rho D(alpha) P], P the photon parity.
inline std::vector<double> wigner(const Matrix& rho,
                                  const std::vector<Complex>& points,
                                  const WignerOptions& opt = {}) {
  if (rho.rows() != rho.cols() || rho.rows() < 2) {
    throw std::invalid_argument("wigner: expected a square single-mode state");
  }
  const auto d = static_cast<int>(rho.rows());
  double amax = 0.0;
  for (const auto& a : points) amax = std::max(amax, std::abs(a));
  const int pad = opt.padding > 0
                      ? opt.padding
                      : static_cast<int>(std::ceil(amax * amax + 8.0 * amax)) + 12;
  const int big = d + pad;
  Matrix r = Matrix::Zero(big, big);
  r.topLeftCorner(d, d) = rho;
  const Matrix a = lowering(big);
  const Matrix ad = a.adjoint();
  const int guard = big - std::max(big / 4, 1);

  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& alpha : points) {
    const Matrix disp = expm(alpha * ad - std::conj(alpha) * a);
    const Matrix shifted = disp.adjoint() * r * disp;
    double leak = 0.0;
    for (int n = guard; n < big; ++n) leak += shifted(n, n).real();
    if (leak > opt.leak_tol) {
      throw std::invalid_argument("wigner: truncation too small (displaced weight " +
                                  std::to_string(leak) + " in top levels)");
    }
    double parity = 0.0;
    for (int n = 0; n < big; ++n) {
      parity += (n % 2 == 0 ? 1.0 : -1.0) * shifted(n, n).real();
    }
    out.push_back(2.0 / kPi * parity);
  }
  return out;
}

// Row-major square grid over [-extent, extent]^2.
inline std::vector<Complex> square_grid(double extent, int points_per_axis) {
  if (points_per_axis < 2) {
    throw std::invalid_argument("square_grid: need at least 2 points per axis");
  }
  std::vector<Complex> out;
  const double step = 2.0 * extent / (points_per_axis - 1);
  for (int i = 0; i < points_per_axis; ++i) {
    for (int j = 0; j < points_per_axis; ++j) {
      out.emplace_back(-extent + step * j, -extent + step * i);
    }
  }
  return out;
}

inline void write_wigner_csv(std::ostream& os, const std::vector<Complex>& points,
                             const std::vector<double>& values) {
  if (points.size() != values.size()) {
    throw std::invalid_argument("write_wigner_csv: size mismatch");
  }
  os << "# re_alpha [sqrt(photon)], im_alpha [sqrt(photon)], W [1/area]\n";
  os << "re_alpha,im_alpha,W\n";
  os << std::setprecision(12);
  for (std::size_t i = 0; i < points.size(); ++i) {
    os << points[i].real() << ',' << points[i].imag() << ',' << values[i] << '\n';
  }
}

}  // namespace aqec
