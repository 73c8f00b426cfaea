#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqec/codes/binomial.hpp"
#include "aqec/codes/deformed.hpp"
#include "aqec/core/layout.hpp"
#include "aqec/core/matrix.hpp"
#include "aqec/quantum/operators.hpp"

namespace aqec {

struct TargetSet {
  HilbertLayout layout;
  std::vector<Vector> initial;
  std::vector<Vector> target;

  std::size_t size() const { return initial.size(); }

  void add(Vector from, Vector to) {
    initial.push_back(std::move(from));
    target.push_back(std::move(to));
  }

  void validate(double tol = 1e-10) const {
    if (initial.size() != target.size() || initial.empty()) {
      throw std::invalid_argument("TargetSet: empty or unpaired");
    }
    const auto n = static_cast<Eigen::Index>(layout.total_dim());
    for (std::size_t i = 0; i < initial.size(); ++i) {
      for (const Vector* v : {&initial[i], &target[i]}) {
        if (v->size() != n) throw std::invalid_argument("TargetSet: state dimension mismatch");
        if (std::abs(v->squaredNorm() - 1.0) > tol) {
          throw std::invalid_argument("TargetSet: pair " + std::to_string(i) +
                                      " is not normalized");
        }
      }
    }
  }
};

enum class GateKind { encode, decode, swap, aqec };

inline GateKind gate_kind_from_string(const std::string& s) {
  if (s == "encode") return GateKind::encode;
  if (s == "decode") return GateKind::decode;
  if (s == "swap") return GateKind::swap;
  if (s == "aqec") return GateKind::aqec;
  throw std::invalid_argument("unknown gate kind '" + s + "'");
}

inline std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::encode: return "encode";
    case GateKind::decode: return "decode";
    case GateKind::swap: return "swap";
    case GateKind::aqec: return "aqec";
  }
  return "unknown";
}

struct TargetOptions {
  std::string qubit = "I1";      // encode/decode qubit
  std::string ancilla = "Y1";    // aqec ancilla
  std::string cavity = "S1";
  int swap_s1_levels = 5;
  int swap_s2_dim = 3;
  std::optional<DeformedFrame> frame;  // required for aqec
};

namespace detail {

// Six Bloch-sphere poles of a logical pair mapped to the same poles.
inline void add_poles(TargetSet& t, const Vector& a0, const Vector& a1, const Vector& b0,
                      const Vector& b1) {
  const double s = 1.0 / std::sqrt(2.0);
  t.add(a0, b0);
  t.add(a1, b1);
  t.add(s * (a0 + a1), s * (b0 + b1));
  t.add(s * (a0 - a1), s * (b0 - b1));
  t.add(s * (a0 + kI * a1), s * (b0 + kI * b1));
  t.add(s * (a0 - kI * a1), s * (b0 - kI * b1));
}

}  // namespace detail

inline TargetSet build_target_set(GateKind kind, const CodeSpec& code,
                                  const TargetOptions& opt = {}) {
  TargetSet t;
  const Vector g = fock(2, 0), e = fock(2, 1);
  const int d = code.dim;
  switch (kind) {
    case GateKind::encode: {
      t.layout = HilbertLayout({{opt.qubit, 2}, {opt.cavity, d}});
      const Vector vac = fock(d, 0);
      detail::add_poles(t, kron(g, vac), kron(e, vac), kron(g, code.zero_l),
                        kron(g, code.one_l));
      break;
    }
    case GateKind::decode: {
      t.layout = HilbertLayout({{opt.qubit, 2}, {opt.cavity, d}});
      const Vector vac = fock(d, 0);
      detail::add_poles(t, kron(g, code.zero_l), kron(g, code.one_l), kron(g, vac),
                        kron(e, vac));
      if (code.dual.size() == 0) throw std::invalid_argument("decode targets need a dual word");
      t.add(kron(g, code.dual), kron(g, fock(d, 1)));
      break;
    }
    case GateKind::swap: {
      const int s1 = opt.swap_s1_levels;
      t.layout = HilbertLayout({{"S1", s1}, {"Y1", 2}, {"S2", opt.swap_s2_dim}, {"Y2", 2}});
      for (int n = 0; n < std::min(s1, 5); ++n) {
        t.add(basis_state(t.layout, {n, 0, 0, 0}), basis_state(t.layout, {n, 0, 0, 0}));
        t.add(basis_state(t.layout, {n, 1, 0, 0}), basis_state(t.layout, {n, 0, 0, 1}));
      }
      break;
    }
    case GateKind::aqec: {
      if (!opt.frame) {
        throw std::invalid_argument("aqec targets need a deformed frame (t_FE, kappa, "
                                    "level frequencies, swap phases)");
      }
      t.layout = HilbertLayout({{opt.ancilla, 2}, {opt.cavity, d}});
      const auto s = deformed_states(*opt.frame, d);
      detail::add_poles(t, kron(g, s.zero_l1), kron(g, s.one_l1), kron(g, s.zero_l2),
                        kron(g, s.one_l2));
      detail::add_poles(t, kron(g, s.zero_e1), kron(g, s.one_e1), kron(e, s.zero_l2s),
                        kron(e, s.one_l2s));
      t.add(kron(g, s.dual1), kron(g, s.dual2));
      break;
    }
  }
  t.validate();
  return t;
}

}  // namespace aqec
