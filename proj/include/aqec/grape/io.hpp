#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqec/grape/optimize.hpp"
#include "aqec/grape/pulse.hpp"
#include "json.hpp"

namespace aqec {

// Columns: t (us, end of sample), then one column per channel (rad/us).
inline void write_pulse_csv(std::ostream& os, const PulseGrid& p) {
  os << "# t [us], channel amplitudes [rad/us]\n";
  os << "t";
  for (const auto& c : p.channels) os << ',' << c;
  os << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < p.samples(); ++i) {
    os << p.dt * static_cast<double>(i + 1);
    for (Eigen::Index x = 0; x < p.channel_count(); ++x) os << ',' << p.values(x, i);
    os << '\n';
  }
}

inline PulseGrid read_pulse_csv(std::istream& is) {
  std::string line;
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    if (names.empty() && rows.empty() && line.rfind("t,", 0) == 0) {
      std::getline(ss, cell, ',');
      while (std::getline(ss, cell, ',')) names.push_back(cell);
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != names.size() + 1) throw std::runtime_error("pulse CSV: ragged row");
    rows.push_back(std::move(row));
  }
  if (names.empty() || rows.empty()) throw std::runtime_error("pulse CSV: no data");
  const double dt = rows.size() > 1 ? rows[1][0] - rows[0][0] : rows[0][0];
  PulseGrid p(dt, names, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t x = 0; x < names.size(); ++x)
      p.values(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(i)) = rows[i][x + 1];
  return p;
}

inline nlohmann::json grape_manifest(const GrapeConfig& cfg, const GrapeResult& r,
                                     const std::string& gate) {
  nlohmann::json j;
  j["gate"] = gate;
  j["dt_us"] = cfg.dt;
  j["duration_us"] = cfg.duration;
  j["seed"] = cfg.seed;
  j["max_iters"] = cfg.max_iters;
  j["tol"] = cfg.tol;
  j["phi0"] = r.phi0;
  j["phi_shape"] = r.shape;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["message"] = r.message;
  j["phi_tot_history"] = r.history;
  return j;
}

}  // namespace aqec
