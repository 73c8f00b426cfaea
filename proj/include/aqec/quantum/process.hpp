#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqec/core/matrix.hpp"
#include "aqec/quantum/channel.hpp"
#include "aqec/quantum/operators.hpp"

namespace aqec {

// chi in an orthonormal operator basis, normalized to unit trace for
// trace-preserving maps.
struct ProcessMatrix {
  Matrix chi;
};

// {I, X, Y, Z}/sqrt(2) for d = 2; Weyl operators X^a Z^b / sqrt(d) otherwise.
inline std::vector<Matrix> operator_basis(Eigen::Index d) {
  std::vector<Matrix> basis;
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  if (d == 2) {
    for (const Matrix& p : {Matrix(Matrix::Identity(2, 2)), pauli_x(), pauli_y(), pauli_z()}) {
      basis.push_back(norm * p);
    }
    return basis;
  }
  Matrix shift = Matrix::Zero(d, d), clock = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    shift((k + 1) % d, k) = 1.0;
    clock(k, k) = std::exp(kI * (kTwoPi * static_cast<double>(k) / static_cast<double>(d)));
  }
  Matrix xa = Matrix::Identity(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    Matrix zb = Matrix::Identity(d, d);
    for (Eigen::Index b = 0; b < d; ++b) {
      basis.push_back(norm * xa * zb);
      zb = zb * clock;
    }
    xa = xa * shift;
  }
  return basis;
}

inline ProcessMatrix chi_from_choi(const Matrix& choi, Eigen::Index d) {
  if (choi.rows() != d * d) {
    throw std::invalid_argument("chi_from_choi: expected a square-channel Choi matrix");
  }
  const auto basis = operator_basis(d);
  Matrix b(d * d, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t m = 0; m < basis.size(); ++m) {
    for (Eigen::Index i = 0; i < d; ++i) {
      b.col(static_cast<Eigen::Index>(m)).segment(i * d, d) = basis[m].col(i);
    }
  }
  Matrix chi = b.adjoint() * choi * b / static_cast<double>(d);
  return {0.5 * (chi + chi.adjoint())};
}

inline ProcessMatrix chi_matrix(const QuantumChannel& channel) {
  if (channel.input_dim() != channel.output_dim()) {
    throw std::invalid_argument("chi_matrix: channel is not square");
  }
  return chi_from_choi(channel.choi(), channel.input_dim());
}

// |g>, |e>, (|g>+|e>)/sqrt2, (|g>-i|e>)/sqrt2.
inline std::array<Vector, 4> cardinal_kets() {
  const double s = 1.0 / std::sqrt(2.0);
  Vector g = fock(2, 0), e = fock(2, 1);
  return {g, e, Vector(s * (g + e)), Vector(s * (g - kI * e))};
}

inline std::vector<Matrix> cardinal_states() {
  std::vector<Matrix> out;
  for (const auto& k : cardinal_kets()) out.push_back(projector(k));
  return out;
}

// Exact linear-inversion tomography from known inputs and their images.
inline ProcessMatrix process_tomography_from_outputs(
    const std::vector<Matrix>& inputs, const std::vector<Matrix>& outputs) {
  if (inputs.empty() || inputs.size() != outputs.size()) {
    throw std::invalid_argument("process_tomography: input/output count mismatch");
  }
  const Eigen::Index d = inputs[0].rows();
  const auto k = static_cast<Eigen::Index>(inputs.size());
  Matrix in(d * d, k), out(d * d, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto& a = inputs[static_cast<std::size_t>(c)];
    const auto& b = outputs[static_cast<std::size_t>(c)];
    if (a.rows() != d || a.cols() != d || b.rows() != d || b.cols() != d) {
      throw std::invalid_argument("process_tomography: state dimension mismatch");
    }
    in.col(c) = Eigen::Map<const Vector>(a.data(), d * d);
    out.col(c) = Eigen::Map<const Vector>(b.data(), d * d);
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(in);
  cod.setThreshold(1e-10);
  if (cod.rank() < d * d) {
    throw std::invalid_argument("process_tomography: input set has rank " +
                                std::to_string(cod.rank()) + ", needs " +
                                std::to_string(d * d));
  }
  const Matrix s = out * cod.pseudoInverse();
  Matrix choi(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index o = 0; o < d; ++o)
        for (Eigen::Index p = 0; p < d; ++p)
          choi(i * d + o, j * d + p) = s(o + d * p, i + d * j);
  return chi_from_choi(choi, d);
}

inline ProcessMatrix process_tomography(const QuantumChannel& channel,
                                        const std::vector<Matrix>& inputs) {
  std::vector<Matrix> outputs;
  outputs.reserve(inputs.size());
  for (const auto& rho : inputs) outputs.push_back(channel.apply(rho));
  return process_tomography_from_outputs(inputs, outputs);
}

inline double process_fidelity(const ProcessMatrix& a, const ProcessMatrix& b) {
  if (a.chi.rows() != b.chi.rows()) {
    throw std::invalid_argument("process_fidelity: dimension mismatch");
  }
  const double f = (a.chi * b.chi).trace().real();
  return std::clamp(f, 0.0, 1.0);
}

inline ProcessMatrix identity_process(Eigen::Index d) {
  return chi_matrix(QuantumChannel::identity(d));
}

}  // namespace aqec
