#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqec/codes/binomial.hpp"
#include "aqec/codes/deformed.hpp"
#include "aqec/codes/recovery.hpp"
#include "aqec/core/layout.hpp"
#include "aqec/core/matrix.hpp"
#include "aqec/device/params.hpp"
#include "aqec/protocol/free_evolution.hpp"
#include "aqec/protocol/lindblad.hpp"
#include "aqec/quantum/channel.hpp"
#include "aqec/quantum/process.hpp"
#include "aqec/rate/budget.hpp"

namespace aqec {

// Per-branch imperfections applied after the recovery gate. `thermal` and
// `recovery_infidelity` replace the branch state by the maximally mixed code
// state; `swap_leak` fully dephases the cavity in the Fock basis.
struct BranchErrors {
  double thermal = 0.0;
  double swap_leak = 0.0;
  double recovery_infidelity = 0.0;

  void validate(const char* which) const {
    for (double v : {thermal, swap_leak, recovery_infidelity}) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string("ErrorModel.") + which +
                                    ": probabilities must lie in [0, 1]");
      }
    }
    if (thermal + recovery_infidelity > 1.0) {
      throw std::invalid_argument(std::string("ErrorModel.") + which +
                                  ": replacement probability exceeds 1");
    }
  }
};

struct ErrorModel {
  BranchErrors logical;  // no-loss branch, ancilla left in |g>
  BranchErrors error;    // single-loss branch, ancilla left in |e>

  void validate() const {
    logical.validate("logical");
    error.validate("error");
  }
};

struct BudgetErrorOptions {
  ThermalInputs thermal;
  double f_ec_l = 0.960, f_ec_e = 0.943;
  double f_swap_l = 0.994, f_swap_e = 0.982;
};

// Per-round error model whose normalized-fidelity deductions match the
// single-round budget at free-evolution time t_fe.
inline ErrorModel error_model_from_budget(double t_fe, const BudgetErrorOptions& o = {}) {
  ErrorModel m;
  m.logical.thermal = thermal_infidelity(o.thermal, t_fe, false);
  m.error.thermal = thermal_infidelity(o.thermal, t_fe, true);
  m.logical.recovery_infidelity = 1.0 - o.f_ec_l;
  m.error.recovery_infidelity = 1.0 - o.f_ec_e;
  // A full Fock dephasing costs 2/3 of the normalized fidelity.
  m.logical.swap_leak = 1.5 * (1.0 - o.f_swap_l);
  m.error.swap_leak = 1.5 * (1.0 - o.f_swap_e);
  m.validate();
  return m;
}

enum class RecoveryKind { none, ideal, unitary };

inline RecoveryKind recovery_kind_from_string(const std::string& s) {
  if (s == "none") return RecoveryKind::none;
  if (s == "ideal") return RecoveryKind::ideal;
  if (s == "unitary" || s == "grape") return RecoveryKind::unitary;
  throw std::invalid_argument("unknown recovery kind '" + s + "'");
}

inline std::string to_string(RecoveryKind k) {
  switch (k) {
    case RecoveryKind::none: return "none";
    case RecoveryKind::ideal: return "ideal";
    case RecoveryKind::unitary: return "unitary";
  }
  return "unknown";
}

struct CycleConfig {
  double t_fe = 220.0;  // us of free evolution per round
  RecoveryKind recovery = RecoveryKind::ideal;
  std::optional<Matrix> recovery_unitary;  // ancilla (x) cavity, for RecoveryKind::unitary
  bool pass_enabled = true;
  // Swap phases the recovery targets compensate, and those the swap imprints
  // (default: the same, i.e. perfectly calibrated).
  std::array<double, 5> phi_g{}, phi_e{};
  std::optional<std::array<double, 5>> imprint_phi_g, imprint_phi_e;
  ErrorModel errors;
  int rounds = 1;
  double gate_time = 6.0;  // us per round outside free evolution, reported time only

  void validate() const {
    if (!(t_fe > 0.0)) throw std::invalid_argument("CycleConfig: t_fe must be positive");
    if (rounds < 1) throw std::invalid_argument("CycleConfig: rounds must be >= 1");
    if (!(gate_time >= 0.0)) throw std::invalid_argument("CycleConfig: negative gate_time");
    if (recovery == RecoveryKind::unitary && !recovery_unitary) {
      throw std::invalid_argument("CycleConfig: recovery 'unitary' needs a recovery_unitary");
    }
    errors.validate();
  }
};

struct CycleReport {
  int round = 0;
  double time = 0.0;  // us since encoding
  ProcessMatrix chi;
  double f_chi = 1.0;
  double f_norm = 1.0;   // (F_chi - 0.25) / 0.75
  double p_logical = 1.0;  // deformed code subspace, before recovery
  double p_error = 0.0;
  double p_other = 0.0;
};

inline double normalized_fidelity(double f_chi) { return (f_chi - 0.25) / 0.75; }

namespace detail {

inline Matrix unitary_superop(const Matrix& u) { return kron(u.conjugate(), u); }

inline Matrix phase_diag(int dim, const std::array<double, 5>& phi) {
  Matrix p = Matrix::Identity(dim, dim);
  for (int n = 0; n < std::min(dim, 5); ++n) {
    p(n, n) = std::exp(kI * phi[static_cast<std::size_t>(n)]);
  }
  return p;
}

inline Matrix fock_dephasing_superop(int dim, double p) {
  const Eigen::Index d2 = static_cast<Eigen::Index>(dim) * dim;
  Matrix s = Matrix::Zero(d2, d2);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) s(r + dim * c, r + dim * c) = r == c ? 1.0 : 1.0 - p;
  return s;
}

inline Matrix replacement_superop(const Matrix& target, double q) {
  const Eigen::Index d = target.rows();
  return (1.0 - q) * Matrix::Identity(d * d, d * d) +
         q * vec(target) * vec(Matrix::Identity(d, d)).transpose();
}

inline HilbertLayout qc_layout(int dim) { return HilbertLayout({{"q", 2}, {"c", dim}}); }

}  // namespace detail

inline DeformedFrame recovery_frame(const CycleConfig& cfg, const FreeEvolutionModel& m) {
  DeformedFrame f = m.frame(cfg.t_fe);
  f.phi_g = cfg.phi_g;
  f.phi_e = cfg.phi_e;
  return f;
}

// Recovery gate, swap-phase imprint and branch errors as a cavity superoperator.
inline Matrix recovery_superoperator(const CycleConfig& cfg, const FreeEvolutionModel& m) {
  const int dim = m.dim;
  const Eigen::Index d2 = static_cast<Eigen::Index>(dim) * dim;
  if (cfg.recovery == RecoveryKind::none) return Matrix::Identity(d2, d2);
  const CodeSpec code = binomial_code(dim);
  Matrix u;
  if (cfg.recovery == RecoveryKind::ideal) {
    u = ideal_recovery_unitary(code, recovery_frame(cfg, m), detail::qc_layout(dim));
  } else {
    u = *cfg.recovery_unitary;
    if (u.rows() != 2 * dim || u.cols() != 2 * dim) {
      throw std::invalid_argument("recovery_unitary must act on ancilla(2) x cavity(" +
                                  std::to_string(dim) + ")");
    }
  }
  const Matrix target = 0.5 * code.code_projector();
  const std::array<const BranchErrors*, 2> errs = {&cfg.errors.logical, &cfg.errors.error};
  const std::array<std::array<double, 5>, 2> imprint = {cfg.imprint_phi_g.value_or(cfg.phi_g),
                                                        cfg.imprint_phi_e.value_or(cfg.phi_e)};
  Matrix s = Matrix::Zero(d2, d2);
  for (int k = 0; k < 2; ++k) {
    const Matrix kraus = detail::phase_diag(dim, imprint[static_cast<std::size_t>(k)]) *
                         u.block(k * dim, 0, dim, dim);
    const BranchErrors& e = *errs[static_cast<std::size_t>(k)];
    s += detail::replacement_superop(target, e.thermal + e.recovery_infidelity) *
         detail::fock_dephasing_superop(dim, e.swap_leak) * detail::unitary_superop(kraus);
  }
  return s;
}

inline QuantumChannel recovery_channel(const CycleConfig& cfg, const FreeEvolutionModel& m) {
  return QuantumChannel::from_superoperator(recovery_superoperator(cfg, m), m.dim, m.dim);
}

// One full round on the cavity: free evolution, then recovery.
inline QuantumChannel cycle_channel(const CycleConfig& cfg, const FreeEvolutionModel& m) {
  cfg.validate();
  return QuantumChannel::from_superoperator(
      recovery_superoperator(cfg, m) * m.superoperator(cfg.t_fe), m.dim, m.dim);
}

// (recovery o free(1/gamma_big))^rounds as a single channel.
inline QuantumChannel trotterized_recovery(double gamma_big, const QuantumChannel& recovery,
                                           int rounds, const FreeEvolutionModel& m) {
  if (!(gamma_big > 0.0) || rounds < 0) {
    throw std::invalid_argument("trotterized_recovery: need gamma_big > 0 and rounds >= 0");
  }
  if (recovery.input_dim() != m.dim || recovery.output_dim() != m.dim) {
    throw std::invalid_argument("trotterized_recovery: recovery dimension mismatch");
  }
  const Matrix step = recovery.superoperator() * m.superoperator(1.0 / gamma_big);
  Matrix total = Matrix::Identity(step.rows(), step.cols());
  for (int i = 0; i < rounds; ++i) total = step * total;
  return QuantumChannel::from_superoperator(total, m.dim, m.dim);
}

inline Matrix encode_superoperator(int dim) {
  const CodeSpec code = binomial_code(dim);
  const auto layout = detail::qc_layout(dim);
  return isometry_channel(ideal_encode_unitary(code, layout), layout, {{"c", 0}}, {"c"})
      .superoperator();
}

inline Matrix decode_superoperator(int dim) {
  const CodeSpec code = binomial_code(dim);
  const auto layout = detail::qc_layout(dim);
  return isometry_channel(ideal_decode_unitary(code, layout), layout, {{"q", 0}}, {"q"})
      .superoperator();
}

// Encode, then `rounds` cycles, then decode; one report per round including
// round 0 (immediate decode).
inline std::vector<CycleReport> run_protocol(const CycleConfig& cfg,
                                             const FreeEvolutionModel& m) {
  cfg.validate();
  m.validate();
  const int dim = m.dim;
  const Matrix enc = encode_superoperator(dim);
  const Matrix dec = decode_superoperator(dim);
  const Matrix free = m.superoperator(cfg.t_fe);
  const Matrix round = recovery_superoperator(cfg, m) * free;
  const ProcessMatrix ideal = identity_process(2);
  const auto cards = cardinal_states();

  auto populations = [&](const Matrix& before_recovery, double frame_t, CycleReport& r) {
    DeformedFrame f = m.frame(frame_t);
    const DeformedStates s = deformed_states(f, dim);
    const Matrix pl = projector(s.zero_l1) + projector(s.one_l1);
    const Matrix pe = projector(s.zero_e1) + projector(s.one_e1);
    r.p_logical = r.p_error = 0.0;
    for (const auto& c : cards) {
      const Matrix rho = unvec(before_recovery * vec(c), dim);
      r.p_logical += (pl * rho).trace().real() / cards.size();
      r.p_error += (pe * rho).trace().real() / cards.size();
    }
    r.p_other = 1.0 - r.p_logical - r.p_error;
  };

  std::vector<CycleReport> out;
  Matrix acc = enc;  // cavity state map after r rounds
  Matrix pre = enc;  // same, before the recovery of round r
  for (int r = 0; r <= cfg.rounds; ++r) {
    if (r > 0) {
      pre = free * acc;
      acc = round * acc;
    }
    CycleReport rep;
    rep.round = r;
    rep.time = r * (cfg.t_fe + cfg.gate_time);
    Matrix track = Matrix::Identity(dim * dim, dim * dim);
    if (cfg.recovery == RecoveryKind::none && r > 0) {
      Matrix undo = Matrix::Zero(dim, dim);
      for (int n = 0; n < dim; ++n) {
        undo(n, n) = std::exp(kI * m.spectrum[static_cast<std::size_t>(n)] * (r * cfg.t_fe));
      }
      track = detail::unitary_superop(undo);
    }
    const QuantumChannel total = QuantumChannel::from_superoperator(dec * track * acc, 2, 2);
    rep.chi = chi_matrix(total);
    rep.f_chi = process_fidelity(rep.chi, ideal);
    rep.f_norm = normalized_fidelity(rep.f_chi);
    const double frame_t =
        r == 0 ? 0.0 : (cfg.recovery == RecoveryKind::none ? r * cfg.t_fe : cfg.t_fe);
    populations(pre, frame_t, rep);
    out.push_back(rep);
  }
  return out;
}

}  // namespace aqec
