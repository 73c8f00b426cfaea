#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqec/core/layout.hpp"
#include "aqec/core/matrix.hpp"
#include "aqec/device/params.hpp"
#include "aqec/quantum/operators.hpp"

namespace aqec {

// Lindblad term rate * (L rho L^dag - 1/2 {L^dag L, rho}).
struct CollapseOp {
  std::string label;
  Matrix op;
  double rate = 0.0;  // 1/us
};

struct CollapseSet {
  std::vector<CollapseOp> ops;

  void add(std::string label, Matrix op, double rate) {
    if (!(rate >= 0.0)) {
      throw std::invalid_argument("collapse rate for '" + label + "' is negative");
    }
    if (rate > 0.0) ops.push_back({std::move(label), std::move(op), rate});
  }

  double max_rate() const {
    double r = 0.0;
    for (const auto& c : ops) r = std::max(r, c.rate * max_abs(c.op) * max_abs(c.op));
    return r;
  }
};

struct CollapseOptions {
  bool decay = true;
  bool heating = true;
  bool dephasing = true;
};

// 1/T_phi = 1/T2 - 1/(2 T1); returns 0 when T2 is absent or at the T1 limit.
inline double pure_dephasing_rate(const ModeParams& m) {
  if (!m.t1_us || !m.t2_us) return 0.0;
  if (*m.t2_us > 2.0 * *m.t1_us) {
    throw std::invalid_argument("mode '" + m.name + "': T2 exceeds 2*T1 (unphysical)");
  }
  const double g = 1.0 / *m.t2_us - 1.0 / (2.0 * *m.t1_us);
  return g > 1e-15 ? g : 0.0;
}

inline CollapseSet build_collapse_set(const DeviceParams& params,
                                      const HilbertLayout& layout,
                                      const CollapseOptions& opt = {}) {
  CollapseSet set;
  for (const auto& mode : layout.modes()) {
    const auto& mp = params.mode(mode.name);
    const double gphi = pure_dephasing_rate(mp);
    if (!mp.t1_us) continue;
    const double g1 = 1.0 / *mp.t1_us;
    const Matrix a = mode_operator(layout, mode.name, ModeOp::lower());
    if (opt.decay) set.add(mode.name + ":decay", a, (1.0 + mp.n_th) * g1);
    if (opt.heating) set.add(mode.name + ":heating", a.adjoint(), mp.n_th * g1);
    if (opt.dephasing && gphi > 0.0) {
      set.add(mode.name + ":dephasing", a.adjoint() * a, 2.0 * gphi);
    }
  }
  return set;
}

}  // namespace aqec
