#pragma once

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace aqec {

// Per-round budget, indexed by case L (no loss) and case E (single loss).
struct BudgetInputs {
  double p_l = 0.0, p_e = 0.0;
  double f_fe_l = 1.0, f_fe_e = 1.0;
  double f_ec_l = 1.0, f_ec_e = 1.0;
  double f_swap_l = 1.0, f_swap_e = 1.0;
  double n_th_l = 0.0, n_th_e = 0.0;

  void validate() const {
    const double v[] = {p_l,    p_e,    f_fe_l,   f_fe_e,   f_ec_l,
                        f_ec_e, f_swap_l, f_swap_e, n_th_l, n_th_e};
    for (double x : v) {
      if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("BudgetInputs: entry outside [0, 1]");
      }
    }
  }
};

inline double budget_total(const BudgetInputs& b) {
  b.validate();
  return b.p_l * (b.f_fe_l - b.n_th_l) * b.f_ec_l * b.f_swap_l +
         b.p_e * (b.f_fe_e - b.n_th_e) * b.f_ec_e * b.f_swap_e;
}

// Thermal excitations of two transmons that appear and decay within one
// free-evolution window, fully dephasing the cavity.
inline double dephasing_infidelity(double n_th_a, double t1_a, double n_th_b,
                                   double t1_b, double t_fe) {
  if (!(t1_a > 0.0) || !(t1_b > 0.0) || !(t_fe >= 0.0) || n_th_a < 0.0 || n_th_b < 0.0) {
    throw std::invalid_argument("dephasing_infidelity: invalid input");
  }
  auto term = [&](double n, double t1) {
    return (1.0 - std::exp(-n * t_fe / t1)) - n * (1.0 - std::exp(-t_fe / t1));
  };
  return term(n_th_a, t1_a) + term(n_th_b, t1_b);
}

// Thermal population accumulated by an un-reset mode over t_fe.
inline double accumulated_population(double n_th, double t1, double t_fe) {
  return n_th * (1.0 - std::exp(-t_fe / t1));
}

// Residual-population dephasing: the dual-protected |0_L> keeps fidelity,
// so a full dephasing costs 2/3 of the normalized fidelity.
inline double swap_fidelity_from_residual(double residual) {
  return 1.0 - residual * 2.0 / 3.0;
}

// Thermal and reset model behind N_th, for either case.
struct ThermalInputs {
  double n_th_i1 = 0.0038, t1_i1 = 145.0;
  double n_th_y1 = 0.0046, t1_y1 = 135.0;
  double n_th_s3 = 0.001, t1_s3 = 91.0;
  // Measured residual populations after reset (Y1 + S2 + Y2).
  double residual_l = 0.0055 + 0.0012 + 0.0055;
  double residual_e = 0.0056 + 0.0060 + 0.0069;
};

inline double thermal_infidelity(const ThermalInputs& in, double t_fe, bool error_case) {
  const double n_res = accumulated_population(in.n_th_i1, in.t1_i1, t_fe) +
                       accumulated_population(in.n_th_s3, in.t1_s3, t_fe) +
                       (error_case ? in.residual_e : in.residual_l);
  const double p_deph = dephasing_infidelity(in.n_th_i1, in.t1_i1, in.n_th_y1, in.t1_y1, t_fe);
  return n_res + 2.0 / 3.0 * p_deph;
}

// Intermediate values as reported for the measured device.
inline BudgetInputs reference_budget_inputs() {
  BudgetInputs b;
  b.p_l = 0.773;
  b.p_e = 0.220;
  b.f_fe_l = 0.944;
  b.f_fe_e = 0.961;
  b.n_th_l = 0.020;
  b.n_th_e = 0.026;
  b.f_ec_l = 0.960;
  b.f_ec_e = 0.943;
  b.f_swap_l = 0.994;
  b.f_swap_e = 0.982;
  return b;
}

inline nlohmann::json to_json(const BudgetInputs& b) {
  return {{"p_L", b.p_l},         {"p_E", b.p_e},         {"F_FE_L", b.f_fe_l},
          {"F_FE_E", b.f_fe_e},   {"F_EC_L", b.f_ec_l},   {"F_EC_E", b.f_ec_e},
          {"F_swap_L", b.f_swap_l}, {"F_swap_E", b.f_swap_e}, {"N_th_L", b.n_th_l},
          {"N_th_E", b.n_th_e}};
}

inline BudgetInputs budget_inputs_from_json(const nlohmann::json& j,
                                            BudgetInputs base = reference_budget_inputs()) {
  auto read = [&](const char* key, double& dst) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) {
      throw std::invalid_argument(std::string("key 'budget.") + key + "' must be a number");
    }
    dst = j.at(key).get<double>();
  };
  for (const auto& [key, _] : j.items()) {
    static const char* known[] = {"p_L", "p_E", "F_FE_L", "F_FE_E", "F_EC_L", "F_EC_E",
                                  "F_swap_L", "F_swap_E", "N_th_L", "N_th_E"};
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw std::invalid_argument("unknown key 'budget." + key + "'");
  }
  read("p_L", base.p_l);
  read("p_E", base.p_e);
  read("F_FE_L", base.f_fe_l);
  read("F_FE_E", base.f_fe_e);
  read("F_EC_L", base.f_ec_l);
  read("F_EC_E", base.f_ec_e);
  read("F_swap_L", base.f_swap_l);
  read("F_swap_E", base.f_swap_e);
  read("N_th_L", base.n_th_l);
  read("N_th_E", base.n_th_e);
  return base;
}

// Table-shaped report of the per-round budget.
inline void print_budget_report(std::ostream& os, const BudgetInputs& b) {
  const double total = budget_total(b);
  os << std::fixed << std::setprecision(1);
  os << "Error budget for a single round (normalized fidelity, %)\n";
  os << "                      case L (no loss)   case E (single loss)\n";
  auto row = [&os](const char* label, double l, double e) {
    os << label << std::setw(8) << 100 * l << "          " << std::setw(8) << 100 * e << '\n';
  };
  row("  population            ", b.p_l, b.p_e);
  row("  intrinsic (F_FE)      ", b.f_fe_l, b.f_fe_e);
  row("  thermal & reset (N_th)", b.n_th_l, b.n_th_e);
  row("  recovery (F_EC)       ", b.f_ec_l, b.f_ec_e);
  row("  transfer (F_swap)     ", b.f_swap_l, b.f_swap_e);
  os << "  total fidelity F = " << 100 * total << "%\n";
  os.unsetf(std::ios::floatfield);
}

}  // namespace aqec
