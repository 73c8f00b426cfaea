#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqec/codes/binomial.hpp"
#include "aqec/codes/recovery.hpp"
#include "aqec/core/layout.hpp"
#include "aqec/core/matrix.hpp"
#include "aqec/core/partial_trace.hpp"
#include "aqec/device/collapse.hpp"
#include "aqec/device/params.hpp"
#include "aqec/protocol/free_evolution.hpp"
#include "aqec/protocol/lindblad.hpp"
#include "aqec/protocol/protocol.hpp"
#include "aqec/quantum/channel.hpp"
#include "aqec/quantum/fidelity.hpp"
#include "aqec/quantum/operators.hpp"
#include "aqec/quantum/process.hpp"

namespace aqec {

// ---------------------------------------------------------------------------
// Subspace populations after free evolution.

struct SubspacePopulations {
  double logical = 0.0;  // deformed code subspace
  double error = 0.0;    // single-loss images
};

// Cardinal-state average, integrated with the fixed-step master-equation
// solver.
inline SubspacePopulations subspace_populations(const FreeEvolutionModel& m, double t,
                                                double dt = 0.1) {
  m.validate();
  const CodeSpec code = binomial_code(m.dim);
  const DeformedStates s = deformed_states(m.frame(t), m.dim);
  const Matrix pl = projector(s.zero_l1) + projector(s.one_l1);
  const Matrix pe = projector(s.zero_e1) + projector(s.one_e1);
  const Matrix enc = code.code_basis();  // dim x 2
  SubspacePopulations out;
  const auto cards = cardinal_states();
  for (const auto& c : cards) {
    const Matrix rho = lindblad_propagate(enc * c * enc.adjoint(), m.hamiltonian(),
                                          m.collapse(), t, dt);
    out.logical += (pl * rho).trace().real() / cards.size();
    out.error += (pe * rho).trace().real() / cards.size();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reset of an excited ancilla that stays dispersively coupled to the cavity.

struct DirectResetOptions {
  double ancilla_t1 = 2.4;  // us, effective decay including the readout path
  double duration = 40.0;   // us, long enough for the ancilla to relax fully
  int dim = 8;
  bool ancilla_excited = true;
  std::string ancilla = "Y1";
  std::string cavity = "S1";
};

struct DirectResetResult {
  std::array<double, 4> state_fidelity{};  // cardinal inputs |0_L>, |1_L>, +, -i
  double process_fidelity = 0.0;
  double compensation_phase = 0.0;  // phase removed per photon pair, rad
};

// The ancilla decays while the cavity accrues a photon-number dependent
// phase from the random decay time. The mean phase is calibrated on a
// (|0> + |2>)/sqrt(2) probe and removed before the dual-aware decode.
inline DirectResetResult direct_reset_study(const DeviceParams& params,
                                            const DirectResetOptions& opt = {}) {
  if (!(opt.ancilla_t1 > 0.0) || !(opt.duration >= 0.0)) {
    throw std::invalid_argument("direct_reset_study: need ancilla_t1 > 0 and duration >= 0");
  }
  const int dim = opt.dim;
  const HilbertLayout layout({{opt.ancilla, 2}, {opt.cavity, dim}});
  const double chi = params.chi(opt.ancilla, opt.cavity);
  const Matrix pe = mode_operator(layout, opt.ancilla, ModeOp::number());
  const Matrix nc = mode_operator(layout, opt.cavity, ModeOp::number());
  const Matrix h = chi * pe * nc;
  CollapseSet collapse;
  collapse.add("ancilla:decay", mode_operator(layout, opt.ancilla, ModeOp::lower()),
               1.0 / opt.ancilla_t1);
  const Matrix evolve = lindblad_superoperator(h, collapse, opt.duration);

  // Cavity -> ancilla (x) cavity with the ancilla prepared, then trace it out.
  Matrix prep = Matrix::Zero(2 * dim, dim);
  prep.block(opt.ancilla_excited ? dim : 0, 0, dim, dim) = Matrix::Identity(dim, dim);
  Matrix discard = Matrix::Zero(dim * dim, 4 * dim * dim);
  for (int k = 0; k < 2; ++k) {
    Matrix proj = Matrix::Zero(dim, 2 * dim);
    proj.block(0, k * dim, dim, dim) = Matrix::Identity(dim, dim);
    discard += detail::unitary_superop(proj);
  }
  const Matrix cavity_map = discard * evolve * detail::unitary_superop(prep);

  const Vector probe = (fock(dim, 0) + fock(dim, 2)) / std::sqrt(2.0);
  const Matrix probe_out = unvec(cavity_map * vec(projector(probe)), dim);
  const double phase = std::arg(probe_out(2, 0));
  Matrix comp = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) comp(n, n) = std::exp(-kI * (phase * n / 2.0));

  const Matrix total = decode_superoperator(dim) * detail::unitary_superop(comp) * cavity_map *
                       encode_superoperator(dim);
  DirectResetResult out;
  out.compensation_phase = phase;
  const auto kets = cardinal_kets();
  for (std::size_t i = 0; i < kets.size(); ++i) {
    const Matrix rho = unvec(total * vec(projector(kets[i])), 2);
    out.state_fidelity[i] = state_fidelity(kets[i], rho);
  }
  const QuantumChannel ch = QuantumChannel::from_superoperator(total, 2, 2);
  out.process_fidelity = aqec::process_fidelity(chi_matrix(ch), identity_process(2));
  return out;
}

// ---------------------------------------------------------------------------
// Swap-phase calibration by Ramsey-type cosine fits.

struct CosineFit {
  double phase = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double rms_residual = 0.0;
};

// Linear least squares of P(theta) = c0 + c1 cos(theta) + c2 sin(theta),
// reported as offset + (amplitude / 2) cos(theta - phase).
inline CosineFit fit_cosine(const std::vector<double>& theta, const std::vector<double>& p) {
  if (theta.size() != p.size() || theta.size() < 3) {
    throw std::invalid_argument("fit_cosine: need at least 3 paired samples");
  }
  const auto n = static_cast<Eigen::Index>(theta.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double th = theta[static_cast<std::size_t>(i)];
    a(i, 0) = 1.0;
    a(i, 1) = std::cos(th);
    a(i, 2) = std::sin(th);
    b(i) = p[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d c = a.colPivHouseholderQr().solve(b);
  CosineFit f;
  f.offset = c(0);
  f.amplitude = 2.0 * std::hypot(c(1), c(2));
  f.phase = std::atan2(c(2), c(1));
  f.rms_residual = std::sqrt((a * c - b).squaredNorm() / static_cast<double>(n));
  return f;
}

// Cavity channel that imprints exp(+i phi_n) on |n>.
inline QuantumChannel ideal_swap_channel(int dim, const std::array<double, 5>& phi) {
  return QuantumChannel::unitary(detail::phase_diag(dim, phi));
}

// Cavity channel of a swap unitary on S1 (x) Y1 (x) S2 (x) Y2 with Y1
// prepared in `ancilla_level` and S2, Y2 in their ground states.
inline QuantumChannel swap_channel_from_unitary(const Matrix& u, const HilbertLayout& layout,
                                                int ancilla_level) {
  return isometry_channel(u, layout, {{"Y1", ancilla_level}, {"S2", 0}, {"Y2", 0}}, {"S1"},
                          1e-6);
}

struct SwapPhaseCalibration {
  std::array<double, 5> phi_g{}, phi_e{};
  std::array<CosineFit, 5> fit_g{}, fit_e{};
  double max_residual = 0.0;
};

// Prepare (|0> + |n>)/sqrt(2), apply the swap, map the |0>,|n> coherence onto
// a qubit, project on (|g> + e^{i theta}|e>)/sqrt(2) and fit the cosine.
inline SwapPhaseCalibration swap_phase_calibration(const QuantumChannel& swap_g,
                                                   const QuantumChannel& swap_e,
                                                   int points = 24,
                                                   double max_residual = 1e-3) {
  const Eigen::Index dim = swap_g.input_dim();
  if (dim < 5 || swap_g.output_dim() != dim || swap_e.input_dim() != dim ||
      swap_e.output_dim() != dim) {
    throw std::invalid_argument(
        "swap_phase_calibration: swaps must map a >= 5 level cavity to itself");
  }
  const int d = static_cast<int>(dim);
  const HilbertLayout layout({{"q", 2}, {"c", d}});
  SwapPhaseCalibration out;
  for (int n = 1; n <= 4; ++n) {
    const Vector psi = (fock(d, 0) + fock(d, n)) / std::sqrt(2.0);
    const Matrix dec = phase_decode_unitary(n, layout);
    for (int k = 0; k < 2; ++k) {
      const Matrix cav = (k == 0 ? swap_g : swap_e).apply(projector(psi));
      const Matrix full = dec * kron(projector(fock(2, 0)), cav) * dec.adjoint();
      const Matrix q = partial_trace(full, layout, {"q"});
      std::vector<double> th, p;
      for (int i = 0; i < points; ++i) {
        const double theta = kTwoPi * i / points;
        const Vector probe = (fock(2, 0) + std::exp(kI * theta) * fock(2, 1)) / std::sqrt(2.0);
        th.push_back(theta);
        p.push_back(probe.dot(q * probe).real());
      }
      const CosineFit f = fit_cosine(th, p);
      out.max_residual = std::max(out.max_residual, f.rms_residual);
      if (f.rms_residual > max_residual) {
        throw std::runtime_error("swap_phase_calibration: cosine fit residual " +
                                 std::to_string(f.rms_residual) + " for n = " +
                                 std::to_string(n));
      }
      (k == 0 ? out.fit_g : out.fit_e)[static_cast<std::size_t>(n)] = f;
      (k == 0 ? out.phi_g : out.phi_e)[static_cast<std::size_t>(n)] = f.phase;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decay time of repeated ideal AQEC when every single loss dephases the
// logical qubit completely.

struct IdealLimitPoint {
  double t_fe = 0.0;
  double f_chi = 1.0;        // one round, exact loss model
  double tau = 0.0;          // us, from F_chi = 0.75 exp(-t/tau) + 0.25
  double ratio = 0.0;        // tau * kappa
  double f_linear = 1.0;     // 1 - nbar kappa t / 2
  double ratio_linear = 0.0;
};

inline std::vector<IdealLimitPoint> ideal_aqec_limit_study(double kappa,
                                                           const std::vector<double>& t_values,
                                                           int dim = 8) {
  if (!(kappa > 0.0)) throw std::invalid_argument("ideal_aqec_limit_study: kappa must be positive");
  constexpr double nbar = 2.0;
  FreeEvolutionModel m;
  m.dim = dim;
  m.kappa = kappa;
  m.spectrum.assign(static_cast<std::size_t>(dim), 0.0);
  const CodeSpec code = binomial_code(dim);
  const Matrix p0 = projector(code.zero_l), p1 = projector(code.one_l);
  const Matrix rest = Matrix::Identity(dim, dim) - p0 - p1;
  const Matrix dephase = detail::unitary_superop(p0) + detail::unitary_superop(p1) +
                         detail::unitary_superop(rest);
  const Matrix enc = encode_superoperator(dim), dec = decode_superoperator(dim);
  const HilbertLayout layout({{"q", 2}, {"c", dim}});
  std::vector<IdealLimitPoint> out;
  for (double t : t_values) {
    if (!(t > 0.0)) throw std::invalid_argument("ideal_aqec_limit_study: t_FE must be positive");
    const Matrix u = ideal_recovery_unitary(code, m.frame(t), layout);
    const Matrix rec = detail::unitary_superop(u.block(0, 0, dim, dim)) +
                       dephase * detail::unitary_superop(u.block(dim, 0, dim, dim));
    const Matrix total = dec * rec * m.superoperator(t) * enc;
    IdealLimitPoint p;
    p.t_fe = t;
    p.f_chi = process_fidelity(chi_matrix(QuantumChannel::from_superoperator(total, 2, 2)),
                               identity_process(2));
    auto tau_of = [&](double f) {
      const double x = normalized_fidelity(f);
      return x > 0.0 && x < 1.0 ? -t / std::log(x) : std::numeric_limits<double>::infinity();
    };
    p.tau = tau_of(p.f_chi);
    p.ratio = p.tau * kappa;
    p.f_linear = 1.0 - nbar * kappa * t / 2.0;
    p.ratio_linear = tau_of(p.f_linear) * kappa;
    out.push_back(p);
  }
  return out;
}

}  // namespace aqec
