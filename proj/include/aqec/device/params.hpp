#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aqec/core/matrix.hpp"

namespace aqec {

enum class ModeKind { qubit, cavity, readout };

inline std::string to_string(ModeKind k) {
  switch (k) {
    case ModeKind::qubit: return "qubit";
    case ModeKind::cavity: return "cavity";
    case ModeKind::readout: return "readout";
  }
  return "unknown";
}

inline ModeKind mode_kind_from_string(const std::string& s) {
  if (s == "qubit") return ModeKind::qubit;
  if (s == "cavity") return ModeKind::cavity;
  if (s == "readout") return ModeKind::readout;
  throw std::invalid_argument("unknown mode kind '" + s + "'");
}

struct ModeParams {
  std::string name;
  ModeKind kind = ModeKind::cavity;
  double freq_mhz = 0.0;
  std::optional<double> t1_us;
  std::optional<double> t2_us;
  double n_th = 0.0;
};

// Signed dispersive / Kerr coefficient chi_mn / 2pi in MHz as entered.
struct KerrEntry {
  std::string a;
  std::string b;
  double mhz = 0.0;
};

struct DeviceParams {
  std::string name;
  std::vector<ModeParams> modes;
  std::vector<KerrEntry> kerr;
  // Pairs with no Kerr entry that are declared uncoupled (chi = 0).
  std::set<std::pair<std::string, std::string>> uncoupled;

  bool has_mode(const std::string& m) const {
    return std::any_of(modes.begin(), modes.end(),
                       [&](const ModeParams& p) { return p.name == m; });
  }

  const ModeParams& mode(const std::string& m) const {
    for (const auto& p : modes) {
      if (p.name == m) return p;
    }
    throw std::invalid_argument("device profile has no mode '" + m + "'");
  }

  ModeParams& mode(const std::string& m) {
    for (auto& p : modes) {
      if (p.name == m) return p;
    }
    throw std::invalid_argument("device profile has no mode '" + m + "'");
  }

  std::optional<double> kerr_mhz(const std::string& a, const std::string& b) const {
    for (const auto& e : kerr) {
      if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e.mhz;
    }
    return std::nullopt;
  }

  bool is_uncoupled(const std::string& a, const std::string& b) const {
    return uncoupled.count({a, b}) > 0 || uncoupled.count({b, a}) > 0;
  }

  // chi_mn in rad/us. Throws for a pair that is neither listed nor whitelisted.
  double chi(const std::string& a, const std::string& b) const {
    if (auto v = kerr_mhz(a, b)) return mhz(*v);
    if (is_uncoupled(a, b)) return 0.0;
    throw std::invalid_argument("missing Kerr entry for pair (" + a + ", " + b +
                                ") and the pair is not declared uncoupled");
  }

  void set_kerr(const std::string& a, const std::string& b, double value_mhz) {
    for (auto& e : kerr) {
      if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) {
        e.mhz = value_mhz;
        return;
      }
    }
    kerr.push_back({a, b, value_mhz});
  }
};

// Human-readable invariant violations; empty when the profile is valid.
inline std::vector<std::string> validate(const DeviceParams& p) {
  std::vector<std::string> issues;
  std::set<std::string> names;
  for (const auto& m : p.modes) {
    if (!names.insert(m.name).second) {
      issues.push_back("duplicate mode '" + m.name + "'");
    }
    if (m.t1_us && *m.t1_us <= 0.0) {
      issues.push_back("mode '" + m.name + "': T1 must be positive");
    }
    if (m.t2_us && *m.t2_us <= 0.0) {
      issues.push_back("mode '" + m.name + "': T2 must be positive");
    }
    if (m.t1_us && m.t2_us && *m.t2_us > 2.0 * *m.t1_us) {
      issues.push_back("mode '" + m.name + "': T2 = " + std::to_string(*m.t2_us) +
                       " us exceeds 2*T1 = " + std::to_string(2.0 * *m.t1_us) + " us");
    }
    if (!(m.n_th >= 0.0 && m.n_th <= 0.05)) {
      issues.push_back("mode '" + m.name + "': thermal population " +
                       std::to_string(m.n_th) + " outside [0, 0.05]");
    }
  }
  for (std::size_t i = 0; i < p.kerr.size(); ++i) {
    const auto& e = p.kerr[i];
    for (const auto& n : {e.a, e.b}) {
      if (!names.count(n)) {
        issues.push_back("Kerr entry (" + e.a + ", " + e.b + ") names unknown mode '" + n + "'");
      }
    }
    for (std::size_t j = i + 1; j < p.kerr.size(); ++j) {
      const auto& f = p.kerr[j];
      const bool same = (e.a == f.a && e.b == f.b);
      const bool mirrored = (e.a == f.b && e.b == f.a);
      if (mirrored && e.a != e.b && std::abs(e.mhz - f.mhz) > 1e-12) {
        issues.push_back("asymmetric Kerr table for pair (" + e.a + ", " + e.b +
                         "): " + std::to_string(e.mhz) + " vs " +
                         std::to_string(f.mhz) + " MHz");
      } else if ((same || mirrored) && std::abs(e.mhz - f.mhz) > 1e-12) {
        issues.push_back("conflicting Kerr entries for pair (" + e.a + ", " + e.b + ")");
      }
    }
  }
  for (const auto& [a, b] : p.uncoupled) {
    for (const auto& n : {a, b}) {
      if (!names.count(n)) {
        issues.push_back("uncoupled pair (" + a + ", " + b + ") names unknown mode '" + n + "'");
      }
    }
  }
  return issues;
}

inline void require_valid(const DeviceParams& p) {
  const auto issues = validate(p);
  if (!issues.empty()) throw std::invalid_argument(issues.front());
}

}  // namespace aqec
