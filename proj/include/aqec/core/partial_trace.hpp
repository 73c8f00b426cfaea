#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqec/core/layout.hpp"
#include "aqec/core/matrix.hpp"

namespace aqec {

// Reduced operator on the kept modes, in layout order.
inline Matrix partial_trace(const Matrix& rho, const HilbertLayout& layout,
                            const std::set<std::string>& keep) {
  const auto n = static_cast<Eigen::Index>(layout.total_dim());
  if (rho.rows() != n || rho.cols() != n) {
    throw std::invalid_argument("partial_trace: operator dimension " +
                                std::to_string(rho.rows()) +
                                " does not match layout dimension " +
                                std::to_string(n));
  }
  for (const auto& k : keep) layout.index_of(k);

  const auto& modes = layout.modes();
  std::vector<bool> kept(modes.size());
  std::vector<Mode> kept_modes, traced_modes;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    kept[i] = keep.count(modes[i].name) > 0;
    (kept[i] ? kept_modes : traced_modes).push_back(modes[i]);
  }
  std::size_t dk = 1, dt = 1;
  for (const auto& m : kept_modes) dk *= static_cast<std::size_t>(m.dim);
  for (const auto& m : traced_modes) dt *= static_cast<std::size_t>(m.dim);

  // full_index[k * dt + t] maps (kept index, traced index) to a flat index.
  std::vector<Eigen::Index> full_index(dk * dt);
  for (std::size_t flat = 0; flat < dk * dt; ++flat) {
    const auto digits = layout.digits(flat);
    std::size_t ki = 0, ti = 0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const auto d = static_cast<std::size_t>(modes[i].dim);
      const auto v = static_cast<std::size_t>(digits[i]);
      if (kept[i]) {
        ki = ki * d + v;
      } else {
        ti = ti * d + v;
      }
    }
    full_index[ki * dt + ti] = static_cast<Eigen::Index>(flat);
  }

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk),
                            static_cast<Eigen::Index>(dk));
  for (std::size_t a = 0; a < dk; ++a) {
    for (std::size_t b = 0; b < dk; ++b) {
      Complex s = 0.0;
      for (std::size_t t = 0; t < dt; ++t) {
        s += rho(full_index[a * dt + t], full_index[b * dt + t]);
      }
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s;
    }
  }
  return out;
}

}  // namespace aqec
