#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "aqec/core/matrix.hpp"
#include "aqec/grape/model.hpp"
#include "aqec/grape/pulse.hpp"
#include "aqec/grape/targets.hpp"

namespace aqec {

struct ShapePenalty {
  double alpha = 0.0;
  double h = mhz(480.0);   // rad/us
  double h_d = mhz(15.0);  // rad/us

  static ShapePenalty defaults(std::size_t channel_count) {
    ShapePenalty p;
    p.alpha = 0.1 / static_cast<double>(channel_count);
    return p;
  }
};

// U = exp(-i (H_static + sum_x eps_x C_x) dt).
inline Matrix propagate_step(const Matrix& h_static, const std::vector<double>& drives,
                             const std::vector<Matrix>& control_ops, double dt) {
  if (drives.size() != control_ops.size()) {
    throw std::invalid_argument("propagate_step: drive count mismatch");
  }
  Matrix h = h_static;
  for (std::size_t x = 0; x < drives.size(); ++x) h += drives[x] * control_ops[x];
  return expm_hermitian(0.5 * (h + h.adjoint()), dt);
}

// Product U_N ... U_1 over the whole grid.
inline Matrix total_propagator(const ControlModel& model, const PulseGrid& pulse) {
  const auto n = static_cast<Eigen::Index>(model.layout.total_dim());
  Matrix u = Matrix::Identity(n, n);
  std::vector<double> drive(model.controls.size());
  for (Eigen::Index i = 0; i < pulse.samples(); ++i) {
    for (std::size_t x = 0; x < drive.size(); ++x) {
      drive[x] = pulse.values(static_cast<Eigen::Index>(x), i);
    }
    u = propagate_step(model.drift, drive, model.controls, pulse.dt) * u;
  }
  return u;
}

// Phi_shape with eps_x(t_0) = 0 before the first sample.
inline double shape_penalty(const PulseGrid& p, const ShapePenalty& s) {
  if (!(s.h > 0.0) || !(s.h_d > 0.0)) {
    throw std::invalid_argument("shape_penalty: h and h_d must be positive");
  }
  const double n = static_cast<double>(p.samples());
  double acc = 0.0;
  for (Eigen::Index x = 0; x < p.channel_count(); ++x) {
    double prev = 0.0;
    for (Eigen::Index i = 0; i < p.samples(); ++i) {
      const double v = p.values(x, i);
      acc += std::expm1((v / s.h) * (v / s.h));
      const double dv = (v - prev) / s.h_d;
      acc += std::expm1(dv * dv);
      prev = v;
    }
  }
  return s.alpha / n * acc;
}

inline RealMatrix shape_penalty_gradient(const PulseGrid& p, const ShapePenalty& s) {
  const double n = static_cast<double>(p.samples());
  RealMatrix g = RealMatrix::Zero(p.channel_count(), p.samples());
  for (Eigen::Index x = 0; x < p.channel_count(); ++x) {
    for (Eigen::Index i = 0; i < p.samples(); ++i) {
      const double v = p.values(x, i);
      const double prev = i > 0 ? p.values(x, i - 1) : 0.0;
      double d = 2.0 * v / (s.h * s.h) * std::exp((v / s.h) * (v / s.h));
      const double a = (v - prev) / s.h_d;
      d += 2.0 * a / s.h_d * std::exp(a * a);
      if (i + 1 < p.samples()) {
        const double b = (p.values(x, i + 1) - v) / s.h_d;
        d -= 2.0 * b / s.h_d * std::exp(b * b);
      }
      g(x, i) = s.alpha / n * d;
    }
  }
  return g;
}

struct GrapeEvaluation {
  double phi0 = 0.0;
  double shape = 0.0;
  double total = 0.0;
  RealMatrix gradient;  // d(total)/d eps, channels x samples
};

namespace detail {

inline void check_problem(const ControlModel& model, const TargetSet& targets,
                          const PulseGrid& pulse) {
  model.validate();
  pulse.validate();
  if (!(model.layout == targets.layout)) {
    throw std::invalid_argument("GRAPE: target layout differs from model layout");
  }
  if (static_cast<std::size_t>(pulse.channel_count()) != model.controls.size()) {
    throw std::invalid_argument("GRAPE: pulse channel count differs from model");
  }
}

inline Matrix stack(const std::vector<Vector>& vs) {
  Matrix m(vs.at(0).size(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vs[i];
  return m;
}

}  // namespace detail

// Phi_0 = 1 - (1/m) sum |<psi_f|U_N...U_1|psi_0>|^2.
inline double objective(const PulseGrid& pulse, const TargetSet& targets,
                        const ControlModel& model) {
  detail::check_problem(model, targets, pulse);
  const Matrix u = total_propagator(model, pulse);
  double acc = 0.0;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    acc += std::norm(targets.target[t].dot(u * targets.initial[t]));
  }
  return std::clamp(1.0 - acc / static_cast<double>(targets.size()), 0.0, 1.0);
}

// Value and exact gradient. Each step derivative uses the eigenbasis form of
// the Frechet derivative of exp(-i H dt).
inline GrapeEvaluation evaluate(const ControlModel& model, const TargetSet& targets,
                                const PulseGrid& pulse, const ShapePenalty& penalty,
                                bool with_gradient = true) {
  detail::check_problem(model, targets, pulse);
  const Eigen::Index steps = pulse.samples();
  const Eigen::Index nc = pulse.channel_count();
  const auto dim = static_cast<Eigen::Index>(model.layout.total_dim());
  const double dt = pulse.dt;
  const auto m = static_cast<double>(targets.size());

  std::vector<Matrix> vecs(static_cast<std::size_t>(with_gradient ? steps : 0));
  std::vector<RealVector> lams(vecs.size());
  std::vector<Matrix> states(vecs.size());

  Matrix psi = detail::stack(targets.initial);
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  for (Eigen::Index i = 0; i < steps; ++i) {
    Matrix h = model.drift;
    for (Eigen::Index x = 0; x < nc; ++x) {
      h += pulse.values(x, i) * model.controls[static_cast<std::size_t>(x)];
    }
    es.compute(h);
    const Matrix& v = es.eigenvectors();
    const RealVector& lam = es.eigenvalues();
    Vector ph(dim);
    for (Eigen::Index k = 0; k < dim; ++k) ph(k) = std::exp(-kI * lam(k) * dt);
    if (with_gradient) {
      const auto si = static_cast<std::size_t>(i);
      states[si] = psi;
      vecs[si] = v;
      lams[si] = lam;
    }
    psi = v * (ph.asDiagonal() * (v.adjoint() * psi));
  }

  const Matrix tgt = detail::stack(targets.target);
  Vector overlaps(static_cast<Eigen::Index>(targets.size()));
  double acc = 0.0;
  for (Eigen::Index t = 0; t < overlaps.size(); ++t) {
    overlaps(t) = tgt.col(t).dot(psi.col(t));
    acc += std::norm(overlaps(t));
  }
  GrapeEvaluation out;
  out.phi0 = std::clamp(1.0 - acc / m, 0.0, 1.0);
  out.shape = shape_penalty(pulse, penalty);
  out.total = out.phi0 + out.shape;
  if (!with_gradient) return out;

  out.gradient = shape_penalty_gradient(pulse, penalty);
  Matrix costate = tgt;
  const Vector oconj = overlaps.conjugate();
  Matrix phi(dim, dim);
  for (Eigen::Index i = steps; i-- > 0;) {
    const auto si = static_cast<std::size_t>(i);
    const Matrix& v = vecs[si];
    const RealVector& lam = lams[si];
    const Matrix w = v.adjoint() * costate;
    const Matrix p = v.adjoint() * states[si];
    for (Eigen::Index j = 0; j < dim; ++j) {
      for (Eigen::Index k = 0; k < dim; ++k) {
        const double xh = 0.5 * (lam(j) - lam(k)) * dt;
        const double sinc = std::abs(xh) < 1e-8 ? 1.0 - xh * xh / 6.0 : std::sin(xh) / xh;
        phi(j, k) = std::exp(-kI * (0.5 * (lam(j) + lam(k)) * dt)) * sinc;
      }
    }
    const Matrix b = phi.cwiseProduct(w.conjugate() * oconj.asDiagonal() * p.transpose());
    const Matrix mm = v * b.transpose() * v.adjoint();
    for (Eigen::Index x = 0; x < nc; ++x) {
      const Matrix& c = model.controls[static_cast<std::size_t>(x)];
      const Complex val = c.cwiseProduct(mm.transpose()).sum();
      out.gradient(x, i) += -2.0 / m * (Complex(0.0, -dt) * val).real();
    }
    Vector phc(dim);
    for (Eigen::Index k = 0; k < dim; ++k) phc(k) = std::exp(kI * lam(k) * dt);
    costate = v * (phc.asDiagonal() * w);
  }
  return out;
}

inline RealMatrix gradient(const PulseGrid& pulse, const TargetSet& targets,
                           const ControlModel& model, const ShapePenalty& penalty) {
  return evaluate(model, targets, pulse, penalty, true).gradient;
}

}  // namespace aqec
