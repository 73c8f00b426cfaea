#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqec/core/matrix.hpp"
#include "aqec/quantum/operators.hpp"

namespace aqec {

// Cavity code words. Error words and the dual word may be empty (size 0)
// for codes that do not define them.
struct CodeSpec {
  int dim = 8;
  Vector zero_l, one_l;
  Vector zero_e, one_e;
  Vector dual;

  Matrix code_projector() const { return projector(zero_l) + projector(one_l); }

  Matrix error_projector() const {
    if (zero_e.size() == 0) return Matrix::Zero(dim, dim);
    return projector(zero_e) + projector(one_e);
  }

  // Columns |0_L>, |1_L>.
  Matrix code_basis() const {
    Matrix b(dim, 2);
    b.col(0) = zero_l;
    b.col(1) = one_l;
    return b;
  }

  void validate(double tol = 1e-10) const {
    auto check_norm = [&](const Vector& v, const char* what) {
      if (v.size() == 0) return;
      if (v.size() != dim) {
        throw std::invalid_argument(std::string("CodeSpec: ") + what + " has wrong dimension");
      }
      if (std::abs(v.squaredNorm() - 1.0) > tol) {
        throw std::invalid_argument(std::string("CodeSpec: ") + what + " is not normalized");
      }
    };
    check_norm(zero_l, "|0_L>");
    check_norm(one_l, "|1_L>");
    check_norm(zero_e, "|0_E>");
    check_norm(one_e, "|1_E>");
    check_norm(dual, "|L_dual>");
    if (zero_l.size() == 0 || one_l.size() == 0) {
      throw std::invalid_argument("CodeSpec: logical words are required");
    }
    if (std::abs(zero_l.dot(one_l)) > tol) {
      throw std::invalid_argument("CodeSpec: logical words are not orthogonal");
    }
    if (zero_e.size() != 0) {
      if (std::abs(zero_e.dot(one_e)) > tol) {
        throw std::invalid_argument("CodeSpec: error words are not orthogonal");
      }
      for (const Vector* e : {&zero_e, &one_e}) {
        for (const Vector* l : {&zero_l, &one_l}) {
          if (std::abs(e->dot(*l)) > tol) {
            throw std::invalid_argument("CodeSpec: error word overlaps the code space");
          }
        }
      }
    }
  }
};

// |0_L> = (|0> + |4>)/sqrt2, |1_L> = |2>, |0_E> = |3>, |1_E> = |1>,
// |L_dual> = (|0> - |4>)/sqrt2.
inline CodeSpec binomial_code(int dim = 8) {
  if (dim < 5) throw std::invalid_argument("binomial_code: needs at least 5 levels");
  const double s = 1.0 / std::sqrt(2.0);
  CodeSpec c;
  c.dim = dim;
  c.zero_l = s * (fock(dim, 0) + fock(dim, 4));
  c.one_l = fock(dim, 2);
  c.zero_e = fock(dim, 3);
  c.one_e = fock(dim, 1);
  c.dual = s * (fock(dim, 0) - fock(dim, 4));
  c.validate();
  return c;
}

inline CodeSpec code_from_words(const Vector& zero, const Vector& one) {
  CodeSpec c;
  c.dim = static_cast<int>(zero.size());
  c.zero_l = zero;
  c.one_l = one;
  c.validate();
  return c;
}

struct KnillLaflammeResult {
  bool pass = false;
  Matrix alpha;  // alpha(j, k) = tr(P E_j^dag E_k P) / 2
  double max_violation = 0.0;
};

// P E_j^dag E_k P = delta_jk alpha_j P on the two-dimensional code space.
inline KnillLaflammeResult knill_laflamme_check(const CodeSpec& code,
                                                const std::vector<Matrix>& errors,
                                                double tol = 1e-10) {
  const Matrix p = code.code_basis();
  const auto m = static_cast<Eigen::Index>(errors.size());
  KnillLaflammeResult r;
  r.alpha = Matrix::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto& ej = errors[static_cast<std::size_t>(j)];
      const auto& ek = errors[static_cast<std::size_t>(k)];
      if (ej.rows() != code.dim || ek.rows() != code.dim) {
        throw std::invalid_argument("knill_laflamme_check: operator dimension mismatch");
      }
      const Matrix block = p.adjoint() * ej.adjoint() * ek * p;
      const Complex a = block.trace() / 2.0;
      r.alpha(j, k) = a;
      const double v = j == k ? max_abs(block - a * Matrix::Identity(2, 2))
                              : max_abs(block);
      r.max_violation = std::max(r.max_violation, v);
    }
  }
  r.pass = r.max_violation < tol;
  return r;
}

}  // namespace aqec
