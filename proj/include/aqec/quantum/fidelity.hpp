#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "aqec/core/matrix.hpp"

namespace aqec {

namespace detail {

inline void require_unit_trace(const Matrix& rho, const char* what) {
  const double dev = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (dev > 1e-6) {
    throw std::invalid_argument(std::string("state_fidelity: ") + what +
                                " has trace deviation " + std::to_string(dev));
  }
}

inline Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  RealVector ev = es.eigenvalues();
  // Roundoff-level eigenvalues would contribute their square roots.
  const double floor = 1e-14 * std::max(ev.maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    ev(i) = ev(i) <= floor ? 0.0 : std::sqrt(ev(i));
  }
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace detail

// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
inline double state_fidelity(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() ||
      rho.rows() != rho.cols()) {
    throw std::invalid_argument("state_fidelity: dimension mismatch");
  }
  detail::require_unit_trace(rho, "first state");
  detail::require_unit_trace(sigma, "second state");
  const Matrix s = detail::psd_sqrt(rho);
  const Matrix m = s * sigma * s;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()),
                                           Eigen::EigenvaluesOnly);
  const double floor = 1e-14 * std::max(es.eigenvalues().maxCoeff(), 0.0);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > floor) acc += std::sqrt(es.eigenvalues()(i));
  }
  return std::clamp(acc * acc, 0.0, 1.0);
}

inline double state_fidelity(const Vector& psi, const Matrix& sigma) {
  if (psi.size() != sigma.rows()) {
    throw std::invalid_argument("state_fidelity: dimension mismatch");
  }
  detail::require_unit_trace(sigma, "second state");
  if (std::abs(psi.squaredNorm() - 1.0) > 1e-6) {
    throw std::invalid_argument("state_fidelity: pure state is not normalized");
  }
  return std::clamp((psi.adjoint() * sigma * psi)(0, 0).real(), 0.0, 1.0);
}

}  // namespace aqec
