#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace aqec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Linear MHz to angular rad/us.
inline constexpr double mhz(double f) { return kTwoPi * f; }

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Deviation from Hermiticity relative to the largest entry.
inline double hermiticity_error(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  const double scale = max_abs(m);
  const double err = max_abs(m - m.adjoint());
  return scale > 0.0 ? err / scale : err;
}

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
  return hermiticity_error(m) < tol;
}

inline Matrix identity(Eigen::Index d) { return Matrix::Identity(d, d); }

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

// exp(-i H t) for Hermitian H.
inline Matrix expm_hermitian(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Matrix& v = es.eigenvectors();
  Vector phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    phases(k) = std::exp(-kI * es.eigenvalues()(k) * t);
  }
  return v * phases.asDiagonal() * v.adjoint();
}

// Hermitian and anti-Hermitian generators take the eigendecomposition path;
// everything else uses scaling-and-squaring Pade.
inline Matrix expm(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("expm: matrix is " + std::to_string(m.rows()) +
                                "x" + std::to_string(m.cols()) +
                                ", expected square");
  }
  if (m.size() == 0) return m;
  const double scale = max_abs(m);
  if (scale == 0.0) return identity(m.rows());
  const double tol = 1e-13 * scale;
  if (max_abs(m - m.adjoint()) <= tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const Matrix& v = es.eigenvectors();
    Vector e = es.eigenvalues().array().exp().cast<Complex>();
    return v * e.asDiagonal() * v.adjoint();
  }
  if (max_abs(m + m.adjoint()) <= tol) {
    // m = -i H with H = i m Hermitian.
    const Matrix h = kI * m;
    return expm_hermitian(0.5 * (h + h.adjoint()), 1.0);
  }
  return m.exp();
}

inline Complex trace(const Matrix& m) { return m.trace(); }

}  // namespace aqec
