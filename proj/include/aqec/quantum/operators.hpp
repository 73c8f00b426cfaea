#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqec/core/layout.hpp"
#include "aqec/core/matrix.hpp"

namespace aqec {

enum class OpKind { lower, raise, number, sigma_x, sigma_y, sigma_z, projector };

struct ModeOp {
  OpKind kind = OpKind::number;
  int level = 0;  // projector only

  static ModeOp lower() { return {OpKind::lower, 0}; }
  static ModeOp raise() { return {OpKind::raise, 0}; }
  static ModeOp number() { return {OpKind::number, 0}; }
  static ModeOp sigma_x() { return {OpKind::sigma_x, 0}; }
  static ModeOp sigma_y() { return {OpKind::sigma_y, 0}; }
  static ModeOp sigma_z() { return {OpKind::sigma_z, 0}; }
  static ModeOp projector(int k) { return {OpKind::projector, k}; }
};

// Truncated lowering operator. For dim 2 this is sigma_minus = |g><e|.
inline Matrix lowering(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline Matrix number_op(int dim) {
  Matrix n = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

// Paulis with |g> = index 0, so sigma_z|g> = +|g>.
inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}
inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix local_operator(int dim, ModeOp op) {
  switch (op.kind) {
    case OpKind::lower:
      return lowering(dim);
    case OpKind::raise:
      return lowering(dim).adjoint();
    case OpKind::number:
      return number_op(dim);
    case OpKind::projector: {
      if (op.level < 0 || op.level >= dim) {
        throw std::invalid_argument("projector level " +
                                    std::to_string(op.level) +
                                    " outside dimension " + std::to_string(dim));
      }
      Matrix p = Matrix::Zero(dim, dim);
      p(op.level, op.level) = 1.0;
      return p;
    }
    case OpKind::sigma_x:
    case OpKind::sigma_y:
    case OpKind::sigma_z:
      if (dim != 2) {
        throw std::invalid_argument("Pauli operator requires dimension 2, got " +
                                    std::to_string(dim));
      }
      if (op.kind == OpKind::sigma_x) return pauli_x();
      if (op.kind == OpKind::sigma_y) return pauli_y();
      return pauli_z();
  }
  throw std::invalid_argument("unknown operator kind");
}

// Embeds a single-mode operator into the full layout.
inline Matrix embed(const HilbertLayout& layout, const std::string& mode,
                    const Matrix& local) {
  const auto idx = layout.index_of(mode);
  const auto& modes = layout.modes();
  if (local.rows() != modes[idx].dim || local.cols() != modes[idx].dim) {
    throw std::invalid_argument("embed: operator for mode '" + mode +
                                "' has dimension " +
                                std::to_string(local.rows()) + ", expected " +
                                std::to_string(modes[idx].dim));
  }
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    out = kron(out, i == idx ? local : identity(modes[i].dim));
  }
  return out;
}

inline Matrix mode_operator(const HilbertLayout& layout, const std::string& mode,
                            ModeOp op) {
  return embed(layout, mode, local_operator(layout.dim_of(mode), op));
}

inline Vector fock(int dim, int n) {
  if (n < 0 || n >= dim) {
    throw std::out_of_range("fock: level " + std::to_string(n) +
                            " outside dimension " + std::to_string(dim));
  }
  Vector v = Vector::Zero(dim);
  v(n) = 1.0;
  return v;
}

// Product basis state; levels given in layout order.
inline Vector basis_state(const HilbertLayout& layout,
                          const std::vector<int>& levels) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  v(static_cast<Eigen::Index>(layout.flat_index(levels))) = 1.0;
  return v;
}

inline Matrix projector(const Vector& psi) { return psi * psi.adjoint(); }

}  // namespace aqec
