#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqec/core/layout.hpp"
#include "aqec/core/matrix.hpp"
#include "aqec/device/hamiltonian.hpp"
#include "aqec/device/params.hpp"

namespace aqec {

// H(t) = drift + sum_x eps_x(t) controls[x].
struct ControlModel {
  HilbertLayout layout;
  Matrix drift;
  std::vector<std::string> channels;
  std::vector<Matrix> controls;

  void validate() const {
    const auto n = static_cast<Eigen::Index>(layout.total_dim());
    if (drift.rows() != n || drift.cols() != n) {
      throw std::invalid_argument("ControlModel: drift dimension mismatch");
    }
    if (channels.size() != controls.size()) {
      throw std::invalid_argument("ControlModel: channel names do not match controls");
    }
    for (const auto& c : controls) {
      if (c.rows() != n || c.cols() != n) {
        throw std::invalid_argument("ControlModel: control dimension mismatch");
      }
    }
  }
};

inline void add_drive(ControlModel& m, const std::string& mode) {
  auto [i_op, q_op] = drive_operators(m.layout, mode);
  m.channels.push_back(mode + "_I");
  m.controls.push_back(std::move(i_op));
  m.channels.push_back(mode + "_Q");
  m.controls.push_back(std::move(q_op));
}

// Two-level qubit (x) truncated cavity with I/Q drives on both; used for
// encode/decode (I1) and for the recovery gate (Y1).
inline ControlModel qubit_cavity_model(const DeviceParams& params, const std::string& qubit,
                                       const std::string& cavity, int cavity_dim) {
  ControlModel m;
  m.layout = HilbertLayout({{qubit, 2}, {cavity, cavity_dim}});
  m.drift = build_static_hamiltonian(params, m.layout, Frame::rotating);
  add_drive(m, cavity);
  add_drive(m, qubit);
  m.validate();
  return m;
}

// S1 (x) Y1 (x) S2 (x) Y2 with drives on Y1, S2 and Y2 only.
inline ControlModel swap_model(const DeviceParams& params, int s1_dim = 5, int s2_dim = 3) {
  ControlModel m;
  m.layout = HilbertLayout({{"S1", s1_dim}, {"Y1", 2}, {"S2", s2_dim}, {"Y2", 2}});
  m.drift = build_static_hamiltonian(params, m.layout, Frame::rotating);
  add_drive(m, "Y1");
  add_drive(m, "S2");
  add_drive(m, "Y2");
  m.validate();
  return m;
}

}  // namespace aqec
