#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqec/codes/binomial.hpp"
#include "aqec/codes/deformed.hpp"
#include "aqec/core/layout.hpp"
#include "aqec/core/matrix.hpp"
#include "aqec/quantum/operators.hpp"

namespace aqec {

namespace detail {

inline void require_orthonormal(const Matrix& cols, const char* what, double tol) {
  const Eigen::Index k = cols.cols();
  const double err = max_abs(cols.adjoint() * cols - Matrix::Identity(k, k));
  if (err > tol) {
    throw std::invalid_argument(std::string("inconsistent frame: ") + what +
                                " are not orthonormal (deviation " +
                                std::to_string(err) + ")");
  }
}

// Extends orthonormal columns to a full basis by Gram-Schmidt over the
// standard basis in index order.
inline Matrix extend_basis(const Matrix& cols) {
  const Eigen::Index n = cols.rows();
  Matrix out(n, n);
  out.leftCols(cols.cols()) = cols;
  Eigen::Index filled = cols.cols();
  for (Eigen::Index e = 0; e < n && filled < n; ++e) {
    Vector v = Vector::Zero(n);
    v(e) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < filled; ++j) {
        v -= out.col(j) * out.col(j).dot(v);
      }
    }
    const double nv = v.norm();
    if (nv > 1e-8) out.col(filled++) = v / nv;
  }
  if (filled != n) throw std::logic_error("extend_basis: failed to span the space");
  return out;
}

}  // namespace detail

// Unitary with U sources.col(i) = targets.col(i), completed deterministically.
inline Matrix complete_unitary(const Matrix& sources, const Matrix& targets,
                               double tol = 1e-9) {
  if (sources.rows() != targets.rows() || sources.cols() != targets.cols()) {
    throw std::invalid_argument("complete_unitary: shape mismatch");
  }
  detail::require_orthonormal(sources, "source states", tol);
  detail::require_orthonormal(targets, "target states", tol);
  const Matrix s = detail::extend_basis(sources);
  const Matrix t = detail::extend_basis(targets);
  return t * s.adjoint();
}

namespace detail {

inline void require_qubit_cavity(const HilbertLayout& layout, int cavity_dim) {
  if (layout.size() != 2 || layout.modes()[0].dim != 2 ||
      layout.modes()[1].dim != cavity_dim) {
    throw std::invalid_argument(
        "expected a layout (two-level ancilla, cavity of the code dimension)");
  }
}

inline Vector g_ket() { return fock(2, 0); }
inline Vector e_ket() { return fock(2, 1); }

}  // namespace detail

// Recovery gate on ancilla (x) cavity: deformed logical words stay with the
// ancilla in |g>, deformed error words are restored with the ancilla in |e>,
// and the dual word is carried along.
inline Matrix ideal_recovery_unitary(const CodeSpec& code, const DeformedFrame& frame,
                                     const HilbertLayout& layout) {
  detail::require_qubit_cavity(layout, code.dim);
  const auto d = deformed_states(frame, code.dim);
  const Vector g = detail::g_ket(), e = detail::e_ket();
  const Eigen::Index n = 2 * code.dim;
  Matrix src(n, 5), dst(n, 5);
  src.col(0) = kron(g, d.zero_l1);
  dst.col(0) = kron(g, d.zero_l2);
  src.col(1) = kron(g, d.one_l1);
  dst.col(1) = kron(g, d.one_l2);
  src.col(2) = kron(g, d.zero_e1);
  dst.col(2) = kron(e, d.zero_l2s);
  src.col(3) = kron(g, d.one_e1);
  dst.col(3) = kron(e, d.one_l2s);
  src.col(4) = kron(g, d.dual1);
  dst.col(4) = kron(g, d.dual2);
  return complete_unitary(src, dst);
}

// Encoder on qubit (x) cavity: |g,0> -> |g,0_L>, |e,0> -> |g,1_L>.
inline Matrix ideal_encode_unitary(const CodeSpec& code, const HilbertLayout& layout) {
  detail::require_qubit_cavity(layout, code.dim);
  const Vector g = detail::g_ket(), e = detail::e_ket();
  const Vector vac = fock(code.dim, 0);
  Matrix src(2 * code.dim, 2), dst(2 * code.dim, 2);
  src.col(0) = kron(g, vac);
  dst.col(0) = kron(g, code.zero_l);
  src.col(1) = kron(e, vac);
  dst.col(1) = kron(g, code.one_l);
  return complete_unitary(src, dst);
}

// Decoder on qubit (x) cavity with the dual row |g,L_dual> -> |g,1>.
inline Matrix ideal_decode_unitary(const CodeSpec& code, const HilbertLayout& layout) {
  detail::require_qubit_cavity(layout, code.dim);
  if (code.dual.size() == 0) {
    throw std::invalid_argument("ideal_decode_unitary: code has no dual word");
  }
  const Vector g = detail::g_ket(), e = detail::e_ket();
  Matrix src(2 * code.dim, 3), dst(2 * code.dim, 3);
  src.col(0) = kron(g, code.zero_l);
  dst.col(0) = kron(g, fock(code.dim, 0));
  src.col(1) = kron(g, code.one_l);
  dst.col(1) = kron(e, fock(code.dim, 0));
  src.col(2) = kron(g, code.dual);
  dst.col(2) = kron(g, fock(code.dim, 1));
  return complete_unitary(src, dst);
}

// Maps |g,0> -> |g,0> and |g,n> -> |e,0>, moving the |0>,|n> coherence onto
// the qubit.
inline Matrix phase_decode_unitary(int n, const HilbertLayout& layout) {
  const int dim = layout.modes().at(1).dim;
  detail::require_qubit_cavity(layout, dim);
  if (n < 1 || n >= dim) throw std::invalid_argument("phase_decode_unitary: bad level");
  const Vector g = detail::g_ket(), e = detail::e_ket();
  Matrix src(2 * dim, 2), dst(2 * dim, 2);
  src.col(0) = kron(g, fock(dim, 0));
  dst.col(0) = kron(g, fock(dim, 0));
  src.col(1) = kron(g, fock(dim, n));
  dst.col(1) = kron(e, fock(dim, 0));
  return complete_unitary(src, dst);
}

// Every c0|0> + c4|4> decodes to qubit |g>, checked over `phases` relative
// phases with equal weights.
inline bool dual_subspace_property(const CodeSpec& code, const Matrix& decode,
                                   int phases = 16, double tol = 1e-9) {
  const Eigen::Index n = 2 * code.dim;
  if (decode.rows() != n || decode.cols() != n) {
    throw std::invalid_argument("dual_subspace_property: decoder dimension mismatch");
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < phases; ++k) {
    const double phi = kTwoPi * k / phases;
    const Vector cav = s * (fock(code.dim, 0) + std::exp(kI * phi) * fock(code.dim, 4));
    const Vector out = decode * kron(detail::g_ket(), cav);
    const double pe = out.tail(code.dim).squaredNorm();
    if (pe > tol) return false;
  }
  return true;
}

}  // namespace aqec
