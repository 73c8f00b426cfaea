#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>

#include "aqec/core/matrix.hpp"
#include "aqec/device/collapse.hpp"
#include "aqec/quantum/channel.hpp"

namespace aqec {

// Column-stacking convention: vec(A rho B) = (B^T (x) A) vec(rho).
inline Matrix lindblad_generator(const Matrix& h, const CollapseSet& collapse) {
  const Eigen::Index d = h.rows();
  if (h.cols() != d) throw std::invalid_argument("lindblad_generator: H is not square");
  const Matrix id = Matrix::Identity(d, d);
  Matrix l = -kI * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& c : collapse.ops) {
    if (c.op.rows() != d || c.op.cols() != d) {
      throw std::invalid_argument("lindblad_generator: collapse operator '" + c.label +
                                  "' has the wrong dimension");
    }
    const Matrix ldl = c.op.adjoint() * c.op;
    l += c.rate * (kron(c.op.conjugate(), c.op) - 0.5 * kron(id, ldl) -
                   0.5 * kron(ldl.transpose(), id));
  }
  return l;
}

inline Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

inline Matrix unvec(const Vector& v, Eigen::Index d) {
  if (v.size() != d * d) throw std::invalid_argument("unvec: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

struct LindbladOptions {
  bool check_convergence = true;  // rerun at dt/2 and compare
  double convergence_tol = 1e-8;  // max-abs difference of the final rho
};

using TimeDependentHamiltonian = std::function<Matrix(double t)>;

namespace detail {

inline double step_bound(double h_norm, const CollapseSet& collapse) {
  return std::max(h_norm, collapse.max_rate());
}

inline int step_count(double t, double dt, double fastest) {
  if (!(t >= 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("lindblad_propagate: need t >= 0 and dt > 0");
  }
  const int n = std::max(1, static_cast<int>(std::ceil(t / dt - 1e-12)));
  const double h = t / n;
  if (h * fastest >= 0.1) {
    throw std::invalid_argument("lindblad_propagate: step size " + std::to_string(h) +
                                " us does not resolve the fastest rate " +
                                std::to_string(fastest) + " /us (need dt*rate < 0.1)");
  }
  return n;
}

// Fourth-order Taylor step of a constant generator (equals classical RK4).
inline Matrix rk4_propagator(const Matrix& l, double h) {
  const Matrix hl = h * l;
  const Matrix hl2 = hl * hl;
  return Matrix::Identity(l.rows(), l.cols()) + hl + hl2 / 2.0 + hl2 * hl / 6.0 +
         hl2 * hl2 / 24.0;
}

inline Vector run_static(const Matrix& l, const Vector& v0, double t, int n) {
  if (t == 0.0) return v0;
  const Matrix p = rk4_propagator(l, t / n);
  Vector v = v0;
  for (int i = 0; i < n; ++i) v = p * v;
  return v;
}

inline Vector run_dynamic(const TimeDependentHamiltonian& h, const CollapseSet& c,
                          const Vector& v0, double t, int n) {
  const double dt = t / n;
  Vector v = v0;
  for (int i = 0; i < n; ++i) {
    const double t0 = i * dt;
    const Matrix l0 = lindblad_generator(h(t0), c);
    const Matrix lm = lindblad_generator(h(t0 + 0.5 * dt), c);
    const Matrix l1 = lindblad_generator(h(t0 + dt), c);
    const Vector k1 = l0 * v;
    const Vector k2 = lm * (v + 0.5 * dt * k1);
    const Vector k3 = lm * (v + 0.5 * dt * k2);
    const Vector k4 = l1 * (v + dt * k3);
    v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

inline void require_converged(const Vector& a, const Vector& b, double tol) {
  const double diff = (a - b).cwiseAbs().maxCoeff();
  if (diff > tol) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", diff);
    throw std::runtime_error(
        std::string("lindblad_propagate: step-halving check failed (difference ") + buf + ")");
  }
}

}  // namespace detail

// Fixed-step RK4 integration of the master equation; dt is an upper bound on
// the step, which is shrunk to divide t exactly.
inline Matrix lindblad_propagate(const Matrix& rho, const Matrix& h,
                                 const CollapseSet& collapse, double t, double dt,
                                 const LindbladOptions& opt = {}) {
  const Eigen::Index d = rho.rows();
  if (h.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("lindblad_propagate: dimension mismatch");
  }
  const int n = detail::step_count(t, dt, detail::step_bound(h.norm(), collapse));
  const Matrix l = lindblad_generator(h, collapse);
  const Vector out = detail::run_static(l, vec(rho), t, n);
  if (opt.check_convergence) {
    detail::require_converged(out, detail::run_static(l, vec(rho), t, 2 * n),
                              opt.convergence_tol);
  }
  return unvec(out, d);
}

inline Matrix lindblad_propagate(const Matrix& rho, const TimeDependentHamiltonian& h,
                                 const CollapseSet& collapse, double t, double dt,
                                 double h_norm_bound, const LindbladOptions& opt = {}) {
  const Eigen::Index d = rho.rows();
  const int n = detail::step_count(t, dt, detail::step_bound(h_norm_bound, collapse));
  const Vector out = detail::run_dynamic(h, collapse, vec(rho), t, n);
  if (opt.check_convergence) {
    detail::require_converged(out, detail::run_dynamic(h, collapse, vec(rho), t, 2 * n),
                              opt.convergence_tol);
  }
  return unvec(out, d);
}

// Exact superoperator exp(L t) for a static generator.
inline Matrix lindblad_superoperator(const Matrix& h, const CollapseSet& collapse, double t) {
  return expm(lindblad_generator(h, collapse) * t);
}

inline QuantumChannel lindblad_channel(const Matrix& h, const CollapseSet& collapse,
                                       double t) {
  const Eigen::Index d = h.rows();
  return QuantumChannel::from_superoperator(lindblad_superoperator(h, collapse, t), d, d);
}

}  // namespace aqec
