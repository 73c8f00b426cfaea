#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aqec/core/layout.hpp"
#include "aqec/core/matrix.hpp"

namespace aqec {

// CPTP map in Kraus form. Kraus operators may be rectangular (out x in).
class QuantumChannel {
 public:
  QuantumChannel() = default;
  explicit QuantumChannel(std::vector<Matrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) {
      throw std::invalid_argument("QuantumChannel: no Kraus operators");
    }
    for (const auto& k : kraus_) {
      if (k.rows() != kraus_[0].rows() || k.cols() != kraus_[0].cols()) {
        throw std::invalid_argument(
            "QuantumChannel: Kraus operators have mismatched dimensions");
      }
    }
  }

  static QuantumChannel identity(Eigen::Index d) {
    return QuantumChannel({Matrix::Identity(d, d)});
  }
  static QuantumChannel unitary(const Matrix& u) { return QuantumChannel({u}); }

  // Choi matrix ordered input (x) output, unnormalized (trace = input dim).
  static QuantumChannel from_choi(const Matrix& choi, Eigen::Index in_dim,
                                  Eigen::Index out_dim, double drop_tol = 1e-14) {
    if (choi.rows() != in_dim * out_dim || choi.cols() != in_dim * out_dim) {
      throw std::invalid_argument("from_choi: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi + choi.adjoint()));
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    std::vector<Matrix> kraus;
    for (Eigen::Index k = es.eigenvalues().size(); k-- > 0;) {
      const double lam = es.eigenvalues()(k);
      if (lam <= drop_tol * scale) continue;
      Matrix op(out_dim, in_dim);
      for (Eigen::Index i = 0; i < in_dim; ++i) {
        for (Eigen::Index o = 0; o < out_dim; ++o) {
          op(o, i) = std::sqrt(lam) * es.eigenvectors()(i * out_dim + o, k);
        }
      }
      kraus.push_back(std::move(op));
    }
    if (kraus.empty()) kraus.push_back(Matrix::Zero(out_dim, in_dim));
    return QuantumChannel(std::move(kraus));
  }

  // Column-stacking convention: vec(rho)[r + d*c] = rho(r, c).
  static QuantumChannel from_superoperator(const Matrix& s, Eigen::Index in_dim,
                                           Eigen::Index out_dim) {
    if (s.rows() != out_dim * out_dim || s.cols() != in_dim * in_dim) {
      throw std::invalid_argument("from_superoperator: dimension mismatch");
    }
    Matrix choi(in_dim * out_dim, in_dim * out_dim);
    for (Eigen::Index i = 0; i < in_dim; ++i)
      for (Eigen::Index j = 0; j < in_dim; ++j)
        for (Eigen::Index o = 0; o < out_dim; ++o)
          for (Eigen::Index p = 0; p < out_dim; ++p)
            choi(i * out_dim + o, j * out_dim + p) = s(o + out_dim * p, i + in_dim * j);
    return from_choi(choi, in_dim, out_dim);
  }

  const std::vector<Matrix>& kraus() const { return kraus_; }
  Eigen::Index input_dim() const { return kraus_.at(0).cols(); }
  Eigen::Index output_dim() const { return kraus_.at(0).rows(); }

  Matrix apply(const Matrix& rho) const {
    if (rho.rows() != input_dim() || rho.cols() != input_dim()) {
      throw std::invalid_argument("QuantumChannel::apply: state dimension " +
                                  std::to_string(rho.rows()) + ", expected " +
                                  std::to_string(input_dim()));
    }
    Matrix out = Matrix::Zero(output_dim(), output_dim());
    for (const auto& k : kraus_) out.noalias() += k * rho * k.adjoint();
    return out;
  }

  Matrix superoperator() const {
    Matrix s = Matrix::Zero(output_dim() * output_dim(), input_dim() * input_dim());
    for (const auto& k : kraus_) s += kron(Matrix(k.conjugate()), k);
    return s;
  }

  Matrix choi() const {
    const Eigen::Index din = input_dim(), dout = output_dim();
    Matrix j = Matrix::Zero(din * dout, din * dout);
    for (const auto& k : kraus_) {
      Vector v(din * dout);
      for (Eigen::Index i = 0; i < din; ++i) v.segment(i * dout, dout) = k.col(i);
      j.noalias() += v * v.adjoint();
    }
    return j;
  }

  double completeness_error() const {
    Matrix s = Matrix::Zero(input_dim(), input_dim());
    for (const auto& k : kraus_) s.noalias() += k.adjoint() * k;
    return max_abs(s - Matrix::Identity(input_dim(), input_dim()));
  }

  double min_choi_eigenvalue() const {
    const Matrix j = choi();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (j + j.adjoint()),
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  bool is_cptp(double tp_tol = 1e-9, double psd_tol = 1e-9) const {
    return completeness_error() < tp_tol && min_choi_eigenvalue() > -psd_tol;
  }

 private:
  std::vector<Matrix> kraus_;
};

// first, then second. Kraus count is compressed through the Choi matrix when
// the product list would exceed the Choi rank bound.
inline QuantumChannel compose(const QuantumChannel& second,
                              const QuantumChannel& first) {
  if (second.input_dim() != first.output_dim()) {
    throw std::invalid_argument("compose: dimension mismatch");
  }
  const std::size_t n = second.kraus().size() * first.kraus().size();
  const auto bound =
      static_cast<std::size_t>(first.input_dim() * second.output_dim());
  if (n <= bound) {
    std::vector<Matrix> kraus;
    kraus.reserve(n);
    for (const auto& b : second.kraus())
      for (const auto& a : first.kraus()) kraus.push_back(b * a);
    return QuantumChannel(std::move(kraus));
  }
  return QuantumChannel::from_superoperator(
      second.superoperator() * first.superoperator(), first.input_dim(),
      second.output_dim());
}

// Channel realized by a unitary on `layout` with some modes prepared in basis
// states and some output modes discarded. Input space: unprepared modes;
// output space: `keep`, both in layout order.
inline QuantumChannel isometry_channel(
    const Matrix& u, const HilbertLayout& layout,
    const std::vector<std::pair<std::string, int>>& prepared,
    const std::set<std::string>& keep, double unitary_tol = 1e-9) {
  const auto n = static_cast<Eigen::Index>(layout.total_dim());
  if (u.rows() != n || u.cols() != n) {
    throw std::invalid_argument("isometry_channel: operator dimension " +
                                std::to_string(u.rows()) +
                                " does not match layout dimension " +
                                std::to_string(n));
  }
  const double err = max_abs(u.adjoint() * u - Matrix::Identity(n, n));
  if (err > unitary_tol) {
    throw std::invalid_argument("isometry_channel: operator is not unitary (|U^dag U - I| = " +
                                std::to_string(err) + ")");
  }
  const auto& modes = layout.modes();
  std::vector<int> fixed(modes.size(), -1);
  for (const auto& [name, level] : prepared) {
    const auto i = layout.index_of(name);
    if (level < 0 || level >= modes[i].dim) {
      throw std::out_of_range("isometry_channel: level " + std::to_string(level) +
                              " outside mode '" + name + "'");
    }
    fixed[i] = level;
  }
  for (const auto& k : keep) layout.index_of(k);

  // Input columns: flat indices whose prepared digits match.
  std::vector<Eigen::Index> in_cols;
  std::vector<Eigen::Index> out_pos(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> env_pos(static_cast<std::size_t>(n));
  Eigen::Index dkeep = 1, denv = 1;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    (keep.count(modes[i].name) ? dkeep : denv) *= modes[i].dim;
  }
  for (Eigen::Index flat = 0; flat < n; ++flat) {
    const auto d = layout.digits(static_cast<std::size_t>(flat));
    bool match = true;
    Eigen::Index ko = 0, eo = 0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      if (fixed[i] >= 0 && d[i] != fixed[i]) match = false;
      if (keep.count(modes[i].name)) {
        ko = ko * modes[i].dim + d[i];
      } else {
        eo = eo * modes[i].dim + d[i];
      }
    }
    if (match) in_cols.push_back(flat);
    out_pos[static_cast<std::size_t>(flat)] = ko;
    env_pos[static_cast<std::size_t>(flat)] = eo;
  }
  const auto din = static_cast<Eigen::Index>(in_cols.size());
  std::vector<Matrix> kraus(static_cast<std::size_t>(denv),
                            Matrix::Zero(dkeep, din));
  for (Eigen::Index c = 0; c < din; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto rs = static_cast<std::size_t>(r);
      kraus[static_cast<std::size_t>(env_pos[rs])](out_pos[rs], c) = u(r, in_cols[c]);
    }
  }
  std::vector<Matrix> nonzero;
  for (auto& k : kraus) {
    if (max_abs(k) > 0.0) nonzero.push_back(std::move(k));
  }
  if (nonzero.empty()) nonzero.push_back(Matrix::Zero(dkeep, din));
  return QuantumChannel(std::move(nonzero));
}

// Stinespring dilation: K_k = <k|_A U |init>_A.
inline QuantumChannel channel_from_dilation(const Matrix& u,
                                            const HilbertLayout& layout,
                                            const std::string& ancilla,
                                            int ancilla_init) {
  std::set<std::string> keep;
  for (const auto& m : layout.modes()) {
    if (m.name != ancilla) keep.insert(m.name);
  }
  layout.index_of(ancilla);
  return isometry_channel(u, layout, {{ancilla, ancilla_init}}, keep);
}

}  // namespace aqec
