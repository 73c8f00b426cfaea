#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "aqec/codes/binomial.hpp"
#include "aqec/device/pass.hpp"
#include "aqec/device/profile.hpp"
#include "aqec/grape/io.hpp"
#include "aqec/grape/optimize.hpp"
#include "aqec/protocol/studies.hpp"
#include "aqec/protocol/sweep.hpp"
#include "aqec/quantum/wigner.hpp"
#include "aqec/rate/budget.hpp"
#include "aqec/rate/rate_model.hpp"

namespace aqec::cli {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNoConvergence = 2;

// Invalid user input; maps to exit status 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> k = {"simulate", "grape", "pass",  "rate",
                                             "budget",   "sweep", "wigner", "direct-reset"};
  return k;
}

// Command-line values; unset optionals fall back to the config file.
struct RunOptions {
  std::string kind;
  std::optional<std::string> config_path;
  std::optional<std::string> profile;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string format = "csv";
  std::optional<double> epsilon;
  std::optional<std::string> gamma;
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return os.str();
}

// Reads typed keys from a JSON object and rejects keys nobody asked for.
class ParamReader {
 public:
  ParamReader(const nlohmann::json& j, std::string prefix)
      : j_(j.is_null() ? nlohmann::json::object() : j), prefix_(std::move(prefix)) {
    if (!j_.is_object()) throw ConfigError("key '" + prefix_ + "' must be an object");
  }

  double number(const std::string& key, double def) {
    used_.insert(key);
    if (!j_.contains(key)) return def;
    if (!j_.at(key).is_number()) throw ConfigError("key '" + where(key) + "' must be a number");
    return j_.at(key).get<double>();
  }

  int integer(const std::string& key, int def) {
    used_.insert(key);
    if (!j_.contains(key)) return def;
    if (!j_.at(key).is_number_integer()) {
      throw ConfigError("key '" + where(key) + "' must be an integer");
    }
    return j_.at(key).get<int>();
  }

  bool boolean(const std::string& key, bool def) {
    used_.insert(key);
    if (!j_.contains(key)) return def;
    if (!j_.at(key).is_boolean()) {
      throw ConfigError("key '" + where(key) + "' must be true or false");
    }
    return j_.at(key).get<bool>();
  }

  std::string text(const std::string& key, const std::string& def,
                   const std::vector<std::string>& allowed = {}) {
    used_.insert(key);
    if (!j_.contains(key)) return def;
    if (!j_.at(key).is_string()) throw ConfigError("key '" + where(key) + "' must be a string");
    const auto v = j_.at(key).get<std::string>();
    if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
      throw ConfigError("key '" + where(key) + "' has unsupported value '" + v + "'");
    }
    return v;
  }

  nlohmann::json object(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) return nlohmann::json::object();
    if (!j_.at(key).is_object()) throw ConfigError("key '" + where(key) + "' must be an object");
    return j_.at(key);
  }

  void positive(const std::string& key, double v) const {
    if (!(v > 0.0)) throw ConfigError("key '" + where(key) + "' must be positive");
  }

  void finish() const {
    for (const auto& [k, _] : j_.items()) {
      if (!used_.count(k)) throw ConfigError("unknown key '" + where(k) + "'");
    }
  }

 private:
  std::string where(const std::string& key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }
  nlohmann::json j_;
  std::string prefix_;
  std::set<std::string> used_;
};

// One output file, held in memory until the whole run has succeeded.
struct OutputFile {
  std::string name;
  std::string content;
};

struct RunResult {
  std::vector<OutputFile> files;
  nlohmann::json resolved;  // parameters after defaults, echoed in the manifest
  std::string summary;      // printed to stdout
  bool converged = true;
};

inline DeviceParams load_profile(const std::string& name_or_path) {
  try {
    DeviceParams p = resolve_profile(name_or_path);
    return p;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("profile: ") + e.what());
  }
}

// "AxB" means gamma_c = gamma_e = A / B (per us); a plain number is the rate.
inline double parse_gamma(const std::string& s) {
  try {
    const auto x = s.find('x');
    std::size_t used = 0;
    if (x == std::string::npos) {
      const double v = std::stod(s, &used);
      if (used != s.size() || !(v > 0.0)) throw std::invalid_argument(s);
      return v;
    }
    const std::string a = s.substr(0, x), b = s.substr(x + 1);
    const double num = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    const double den = std::stod(b, &used);
    if (used != b.size() || !(num > 0.0) || !(den > 0.0)) throw std::invalid_argument(s);
    return num / den;
  } catch (const std::exception&) {
    throw ConfigError("--gamma: expected a rate or 'AxB' meaning A/B per us, got '" + s + "'");
  }
}

// ---------------------------------------------------------------------------
// Tables: written as CSV (units in a '#' header line) or JSON.

struct Table {
  std::string units;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string render(const std::string& format) const {
    std::ostringstream os;
    os << std::setprecision(12);
    if (format == "json") {
      nlohmann::json j;
      j["units"] = units;
      j["columns"] = columns;
      j["rows"] = rows;
      os << j.dump(2) << '\n';
      return os.str();
    }
    os << "# " << units << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
    return os.str();
  }
};

inline std::string ext(const std::string& format) { return format == "json" ? ".json" : ".csv"; }

inline Table report_table(const std::vector<CycleReport>& reps) {
  Table t;
  t.units = "round [-], t [us], F_chi [-], F_norm [-], p_logical [-], p_error [-], p_other [-]";
  t.columns = {"round", "t_us", "F_chi", "F_norm", "p_logical", "p_error", "p_other"};
  for (const auto& r : reps) {
    t.rows.push_back({static_cast<double>(r.round), r.time, r.f_chi, r.f_norm, r.p_logical,
                      r.p_error, r.p_other});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Experiment runners. Each reads `params`, validates it completely, computes,
// and returns the outputs without touching the filesystem.

struct Context {
  DeviceParams profile;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string format = "csv";
  RunOptions opts;
};

inline FreeEvolutionModel model_from(const Context& c, ParamReader& p, nlohmann::json& res) {
  FreeModelOptions o;
  o.pass_enabled = p.boolean("pass", true);
  o.dim = p.integer("dim", 8);
  o.heating = p.boolean("heating", true);
  o.dephasing = p.boolean("dephasing", false);
  if (o.dim < 5 || o.dim > 40) throw ConfigError("key 'params.dim' must lie in [5, 40]");
  res["pass"] = o.pass_enabled;
  res["dim"] = o.dim;
  res["heating"] = o.heating;
  res["dephasing"] = o.dephasing;
  return free_model_from_profile(c.profile, o);
}

inline RunResult run_simulate(const Context& c, ParamReader& p) {
  RunResult r;
  CycleConfig cfg;
  cfg.t_fe = p.number("t_fe", 220.0);
  p.positive("t_fe", cfg.t_fe);
  cfg.rounds = p.integer("rounds", 10);
  if (cfg.rounds < 1) throw ConfigError("key 'params.rounds' must be >= 1");
  cfg.gate_time = p.number("gate_time", 6.0);
  const auto rec = p.text("recovery", "ideal", {"ideal", "none"});
  cfg.recovery = recovery_kind_from_string(rec);
  const auto errs = p.text("errors", "budget", {"budget", "none"});
  const FreeEvolutionModel model = model_from(c, p, r.resolved);
  p.finish();
  if (errs == "budget" && cfg.recovery != RecoveryKind::none) {
    cfg.errors = error_model_from_budget(cfg.t_fe);
  }
  cfg.pass_enabled = r.resolved["pass"];
  r.resolved.update({{"t_fe", cfg.t_fe}, {"rounds", cfg.rounds}, {"gate_time", cfg.gate_time},
                     {"recovery", rec}, {"errors", errs}});
  const auto reps = run_protocol(cfg, model);
  r.files.push_back({"rounds" + ext(c.format), report_table(reps).render(c.format)});
  std::ostringstream s;
  s << "simulate: " << cfg.rounds << " rounds, t_fe = " << cfg.t_fe
    << " us, final F_chi = " << std::setprecision(4) << reps.back().f_chi << '\n';
  r.summary = s.str();
  return r;
}

inline RunResult run_grape(const Context& c, ParamReader& p) {
  RunResult r;
  const auto gate = p.text("gate", "encode", {"encode", "decode", "swap"});
  GrapeConfig g;
  const double default_duration = gate == "encode" ? 1.2 : gate == "decode" ? 1.8 : 1.6;
  g.duration = p.number("duration", default_duration);
  g.dt = p.number("dt", 0.002);
  g.max_iters = p.integer("max_iters", 2000);
  g.tol = p.number("tol", gate == "swap" ? 0.02 : 0.01);
  g.init_rms = p.number("init_rms", 2.0);
  g.seed = c.seed;
  const int dim = p.integer("dim", 8);
  p.finish();
  p.positive("duration", g.duration);
  p.positive("dt", g.dt);
  try {
    samples_for(g.duration, g.dt);
  } catch (const std::invalid_argument&) {
    throw ConfigError("key 'params.duration' must be a multiple of 'params.dt'");
  }
  const CodeSpec code = binomial_code(dim);
  const GateKind kind = gate_kind_from_string(gate);
  const ControlModel model =
      kind == GateKind::swap ? swap_model(c.profile)
                             : qubit_cavity_model(c.profile, "I1", "S1", dim);
  const TargetSet targets = build_target_set(kind, code);
  const GrapeResult res = optimize(targets, model, g);
  r.converged = res.converged;
  r.resolved = {{"gate", gate},         {"duration", g.duration}, {"dt", g.dt},
                {"max_iters", g.max_iters}, {"tol", g.tol},       {"init_rms", g.init_rms},
                {"dim", dim}};
  std::ostringstream pulse;
  write_pulse_csv(pulse, res.pulse);
  r.files.push_back({"pulse.csv", pulse.str()});
  r.files.push_back({"grape.json", grape_manifest(g, res, gate).dump(2) + "\n"});
  std::ostringstream s;
  s << "grape " << gate << ": Phi_0 = " << std::setprecision(4) << res.phi0 << " after "
    << res.iterations << " iterations (" << (res.converged ? "converged" : "NOT converged")
    << ")\n";
  r.summary = s.str();
  return r;
}

inline RunResult run_pass(const Context& c, ParamReader& p) {
  RunResult r;
  const auto qubit = p.text("qubit", "I1");
  const auto cavity = p.text("cavity", "S1");
  p.finish();
  double chi = 0.0, kerr = 0.0;
  try {
    chi = -c.profile.chi(qubit, cavity);
    kerr = -c.profile.chi(cavity, cavity);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  const PassWorkingPoint wp = optimize_pass(chi, kerr);
  r.resolved = {{"qubit", qubit}, {"cavity", cavity}};
  Table t;
  t.units = "quantity, value (angular rates in rad/us, frequencies in MHz)";
  t.columns = {"chi", "kerr", "delta", "omega", "drive_detuning", "drive_detuning_mhz",
               "omega_sq_over_chi_kerr", "mean_excitation", "mismatch"};
  t.rows.push_back({chi, kerr, wp.delta, wp.omega, wp.drive_detuning,
                    wp.drive_detuning / kTwoPi, wp.omega_sq_over_chi_kerr, wp.mean_excitation,
                    wp.mismatch});
  r.files.push_back({"pass" + ext(c.format), t.render(c.format)});
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << "PASS: drive detuning = "
    << wp.drive_detuning / chi << " chi (" << wp.drive_detuning / kTwoPi
    << " MHz), Omega^2/(chi K) = " << wp.omega_sq_over_chi_kerr << '\n';
  r.summary = s.str();
  return r;
}

inline RunResult run_rate(const Context& c, ParamReader& p) {
  RunResult r;
  double eps = p.number("epsilon", 1.0 - 0.924);
  double gamma = p.number("gamma", 2.0 / 1380.0);
  const double t_min = p.number("tau_min", 10.0);
  const double t_max = p.number("tau_max", 1000.0);
  const int points = p.integer("points", 100);
  p.finish();
  if (c.opts.epsilon) eps = *c.opts.epsilon;
  if (c.opts.gamma) gamma = parse_gamma(*c.opts.gamma);
  if (!(eps >= 0.0)) throw ConfigError("key 'params.epsilon' must be >= 0");
  if (!(gamma > 0.0)) throw ConfigError("key 'params.gamma' must be positive");
  if (!(t_min > 0.0) || !(t_max > t_min) || points < 2) {
    throw ConfigError("key 'params.tau_min/tau_max/points' describe an empty grid");
  }
  r.resolved = {{"epsilon", eps}, {"gamma", gamma}, {"tau_min", t_min}, {"tau_max", t_max},
                {"points", points}};
  const double tau_opt = optimal_interval(eps, gamma, gamma);
  Table t;
  t.units = "tau [us], gamma_eff [1/us]";
  t.columns = {"tau_us", "gamma_eff"};
  for (int i = 0; i < points; ++i) {
    const double tau = t_min + (t_max - t_min) * i / (points - 1);
    t.rows.push_back({tau, effective_decay_rate(eps, gamma, gamma, tau)});
  }
  r.files.push_back({"rate" + ext(c.format), t.render(c.format)});
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << "tau_opt = " << tau_opt << " us"
    << std::setprecision(4) << " (gamma_eff = " << std::scientific
    << effective_decay_rate(eps, gamma, gamma, tau_opt > 0 ? tau_opt : 1.0) << " /us)\n";
  r.summary = s.str();
  return r;
}

inline RunResult run_budget(const Context& c, ParamReader& p) {
  RunResult r;
  BudgetInputs b;
  try {
    b = budget_inputs_from_json(p.object("budget"));
    b.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  p.finish();
  r.resolved = {{"budget", to_json(b)}};
  std::ostringstream rep;
  print_budget_report(rep, b);
  Table t;
  t.units = "quantity [-]";
  t.columns = {"p_L", "p_E", "F_FE_L", "F_FE_E", "N_th_L", "N_th_E", "F_EC_L", "F_EC_E",
               "F_swap_L", "F_swap_E", "F_total"};
  t.rows.push_back({b.p_l, b.p_e, b.f_fe_l, b.f_fe_e, b.n_th_l, b.n_th_e, b.f_ec_l, b.f_ec_e,
                    b.f_swap_l, b.f_swap_e, budget_total(b)});
  r.files.push_back({"budget" + ext(c.format), t.render(c.format)});
  r.summary = rep.str();
  return r;
}

inline RunResult run_sweep(const Context& c, ParamReader& p) {
  RunResult r;
  const double t_min = p.number("t_min", 50.0);
  const double t_max = p.number("t_max", 500.0);
  const double step = p.number("t_step", 25.0);
  SweepOptions so;
  so.horizon = p.number("horizon", 2000.0);
  so.perfect_gates = p.boolean("perfect_gates", false);
  so.jobs = c.jobs;
  const FreeEvolutionModel model = model_from(c, p, r.resolved);
  p.finish();
  if (!(t_min > 0.0) || !(t_max >= t_min) || !(step > 0.0)) {
    throw ConfigError("key 'params.t_min/t_max/t_step' describe an empty grid");
  }
  std::vector<double> ts;
  for (int i = 0; t_min + i * step <= t_max + 1e-9; ++i) ts.push_back(t_min + i * step);
  r.resolved.update({{"t_min", t_min}, {"t_max", t_max}, {"t_step", step},
                     {"horizon", so.horizon}, {"perfect_gates", so.perfect_gates}});
  const SweepResult sw = sweep_tfe(CycleConfig{}, model, ts, so);
  Table t;
  t.units = "t_fe [us], tau [us], F0 [-], rms residual [-], degenerate [0/1]";
  t.columns = {"t_fe_us", "tau_us", "F0", "rms_residual", "degenerate"};
  for (const auto& pt : sw.points) {
    t.rows.push_back({pt.t_fe, pt.fit.tau, pt.fit.f0, pt.fit.rms_residual,
                      pt.fit.degenerate ? 1.0 : 0.0});
    std::ostringstream name;
    name << "t_fe_" << std::setw(4) << std::setfill('0') << std::llround(pt.t_fe) << "/rounds"
         << ext(c.format);
    r.files.push_back({name.str(), report_table(pt.reports).render(c.format)});
  }
  r.files.insert(r.files.begin(), {"sweep" + ext(c.format), t.render(c.format)});
  std::ostringstream s;
  s << "sweep: best t_fe = " << sw.best_t_fe() << " us, tau = " << std::setprecision(5)
    << sw.points[sw.best].fit.tau << " us\n";
  r.summary = s.str();
  return r;
}

inline RunResult run_wigner(const Context& c, ParamReader& p) {
  RunResult r;
  const auto state = p.text("state", "0L", {"0L", "1L", "+", "-", "+i", "-i", "dual"});
  const double t = p.number("t_fe", 0.0);
  const double extent = p.number("extent", 3.0);
  const int n = p.integer("points", 41);
  const FreeEvolutionModel model = model_from(c, p, r.resolved);
  p.finish();
  if (!(t >= 0.0)) throw ConfigError("key 'params.t_fe' must be >= 0");
  if (!(extent > 0.0) || n < 2) {
    throw ConfigError("key 'params.extent/points' describe an empty grid");
  }
  const CodeSpec code = binomial_code(model.dim);
  const double s2 = 1.0 / std::sqrt(2.0);
  Vector psi;
  if (state == "0L") psi = code.zero_l;
  else if (state == "1L") psi = code.one_l;
  else if (state == "+") psi = s2 * (code.zero_l + code.one_l);
  else if (state == "-") psi = s2 * (code.zero_l - code.one_l);
  else if (state == "+i") psi = s2 * (code.zero_l + kI * code.one_l);
  else if (state == "-i") psi = s2 * (code.zero_l - kI * code.one_l);
  else psi = code.dual;
  Matrix rho = projector(psi);
  if (t > 0.0) rho = unvec(model.superoperator(t) * vec(rho), model.dim);
  r.resolved.update({{"state", state}, {"t_fe", t}, {"extent", extent}, {"points", n}});
  const auto grid = square_grid(extent, n);
  const auto w = wigner(rho, grid);
  Table tab;
  tab.units = "re_alpha [sqrt(photon)], im_alpha [sqrt(photon)], W [1/area]";
  tab.columns = {"re_alpha", "im_alpha", "W"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    tab.rows.push_back({grid[i].real(), grid[i].imag(), w[i]});
  }
  r.files.push_back({"wigner" + ext(c.format), tab.render(c.format)});
  r.summary = "wigner: " + std::to_string(grid.size()) + " points for state " + state + "\n";
  return r;
}

inline RunResult run_direct_reset(const Context& c, ParamReader& p) {
  RunResult r;
  DirectResetOptions o;
  o.ancilla_t1 = p.number("ancilla_t1", 2.4);
  o.duration = p.number("duration", 40.0);
  o.dim = p.integer("dim", 8);
  o.ancilla_excited = p.boolean("ancilla_excited", true);
  p.finish();
  p.positive("ancilla_t1", o.ancilla_t1);
  if (o.dim < 5) throw ConfigError("key 'params.dim' must be >= 5");
  r.resolved = {{"ancilla_t1", o.ancilla_t1}, {"duration", o.duration}, {"dim", o.dim},
                {"ancilla_excited", o.ancilla_excited}};
  const DirectResetResult res = direct_reset_study(c.profile, o);
  Table t;
  t.units = "fidelities [-], compensation phase [rad]";
  t.columns = {"F_0L", "F_1L", "F_plus", "F_minus_i", "F_process", "compensation_phase"};
  t.rows.push_back({res.state_fidelity[0], res.state_fidelity[1], res.state_fidelity[2],
                    res.state_fidelity[3], res.process_fidelity, res.compensation_phase});
  r.files.push_back({"direct_reset" + ext(c.format), t.render(c.format)});
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << "direct reset: state fidelities "
    << 100 * res.state_fidelity[0] << "%, " << 100 * res.state_fidelity[1] << "%, "
    << 100 * res.state_fidelity[2] << "%, " << 100 * res.state_fidelity[3]
    << "%; process fidelity " << 100 * res.process_fidelity << "%\n";
  r.summary = s.str();
  return r;
}

// ---------------------------------------------------------------------------

inline nlohmann::json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

// Resolves flags and config into a run; throws ConfigError before any
// output is written.
inline int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    nlohmann::json cfg = opts.config_path ? read_config_file(*opts.config_path)
                                          : nlohmann::json::object();
    ParamReader top(cfg, "");
    const int version = top.integer("schema_version", kConfigSchemaVersion);
    if (version != kConfigSchemaVersion) {
      throw ConfigError("key 'schema_version': unsupported value " + std::to_string(version));
    }
    std::string kind = top.text("kind", opts.kind, experiment_kinds());
    if (!opts.kind.empty() && kind != opts.kind) {
      throw ConfigError("key 'kind': config says '" + kind + "' but the command asks for '" +
                        opts.kind + "'");
    }
    if (std::find(experiment_kinds().begin(), experiment_kinds().end(), kind) ==
        experiment_kinds().end()) {
      throw ConfigError("unknown experiment kind '" + kind + "'");
    }
    const std::string profile_name = opts.profile.value_or(top.text("profile", "paper-default"));
    const std::string out_dir = opts.out.value_or(top.text("out", "out/" + kind));
    const auto seed_cfg = top.integer("seed", 1);
    const std::string format = top.text("format", opts.format, {"csv", "json"});
    if (opts.format != "csv" && opts.format != "json") {
      throw ConfigError("--format must be csv or json");
    }
    nlohmann::json params = top.object("params");
    top.finish();

    Context ctx;
    ctx.profile = load_profile(profile_name);
    const auto issues = validate(ctx.profile);
    if (!issues.empty()) throw ConfigError("profile '" + profile_name + "': " + issues.front());
    ctx.seed = opts.seed.value_or(static_cast<std::uint64_t>(seed_cfg));
    ctx.jobs = std::max(1, opts.jobs);
    ctx.format = opts.format != "csv" ? opts.format : format;
    ctx.opts = opts;

    ParamReader pr(params, "params");
    RunResult res;
    if (kind == "simulate") res = run_simulate(ctx, pr);
    else if (kind == "grape") res = run_grape(ctx, pr);
    else if (kind == "pass") res = run_pass(ctx, pr);
    else if (kind == "rate") res = run_rate(ctx, pr);
    else if (kind == "budget") res = run_budget(ctx, pr);
    else if (kind == "sweep") res = run_sweep(ctx, pr);
    else if (kind == "wigner") res = run_wigner(ctx, pr);
    else res = run_direct_reset(ctx, pr);

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    nlohmann::json manifest;
    manifest["schema_version"] = kConfigSchemaVersion;
    manifest["kind"] = kind;
    manifest["profile"] = to_json(ctx.profile);
    manifest["seed"] = ctx.seed;
    manifest["format"] = ctx.format;
    manifest["params"] = res.resolved;
    manifest["converged"] = res.converged;
    manifest["files"] = nlohmann::json::object();
    for (const auto& f : res.files) {
      const fs::path path = fs::path(out_dir) / f.name;
      fs::create_directories(path.parent_path());
      std::ofstream os(path, std::ios::binary);
      os << f.content;
      if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
      manifest["files"][f.name] = {{"sha256", sha256_hex(f.content)}};
    }
    std::ofstream mf(fs::path(out_dir) / "manifest.json", std::ios::binary);
    mf << manifest.dump(2) << '\n';
    out << res.summary;
    if (!res.converged) {
      err << "error: numerical optimization did not converge\n";
      return kExitNoConvergence;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

// ---------------------------------------------------------------------------

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline std::vector<CheckLine> validation_checks(const DeviceParams& profile) {
  std::vector<CheckLine> out;
  auto guard = [&](const std::string& name, auto&& fn) {
    try {
      out.push_back(fn());
      out.back().name = name;
    } catch (const std::exception& e) {
      out.push_back({name, false, e.what()});
    }
  };

  guard("profile", [&] {
    const auto issues = validate(profile);
    std::string d;
    for (const auto& i : issues) d += (d.empty() ? "" : "; ") + i;
    return CheckLine{"", issues.empty(), issues.empty() ? "consistent" : d};
  });
  if (!out.back().pass) return out;

  guard("cptp", [&] {
    const FreeEvolutionModel m = free_model_from_profile(profile);
    CycleConfig cfg;
    cfg.errors = error_model_from_budget(cfg.t_fe);
    const QuantumChannel ch = cycle_channel(cfg, m);
    const double tp = ch.completeness_error(), psd = ch.min_choi_eigenvalue();
    std::ostringstream d;
    d << "|sum K^dag K - I| = " << tp << ", min Choi eigenvalue = " << psd;
    return CheckLine{"", tp < 1e-8 && psd > -1e-8, d.str()};
  });

  guard("knill-laflamme", [&] {
    const CodeSpec code = binomial_code(8);
    const auto kl = knill_laflamme_check(code, {Matrix::Identity(8, 8), lowering(8)}, 1e-10);
    std::ostringstream d;
    d << "max violation " << kl.max_violation;
    return CheckLine{"", kl.pass, d.str()};
  });

  guard("gradient", [&] {
    // Small problem on a 2 x 5 space so the check stays fast.
    const ControlModel small = qubit_cavity_model(profile, "I1", "S1", 5);
    const TargetSet tg = build_target_set(GateKind::encode, binomial_code(5));
    const PulseGrid pulse = smooth_noise_pulse(0.02, small.channels, 20, 5.0, 2.0, 7);
    const ShapePenalty pen = ShapePenalty::defaults(small.channels.size());
    const RealMatrix g = gradient(pulse, tg, small, pen);
    double worst = 0.0;
    const double h = 1e-6;
    for (int k = 0; k < 8; ++k) {
      const Eigen::Index x = k % pulse.channel_count(), i = (5 * k + 3) % pulse.samples();
      PulseGrid a = pulse, b = pulse;
      a.values(x, i) += h;
      b.values(x, i) -= h;
      const double fd = (evaluate(small, tg, a, pen, false).total -
                         evaluate(small, tg, b, pen, false).total) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - g(x, i)) / std::max(std::abs(fd), 1e-8));
    }
    std::ostringstream d;
    d << "worst relative error " << worst;
    return CheckLine{"", worst < 1e-4, d.str()};
  });

  guard("analytic-decay", [&] {
    const ModeParams& s1 = profile.mode("S1");
    if (!s1.t1_us) throw std::invalid_argument("S1 has no T1");
    CollapseSet c;
    c.add("loss", lowering(8), 1.0 / *s1.t1_us);
    const Matrix rho = lindblad_propagate(projector(fock(8, 1)), Matrix::Zero(8, 8), c, 220.0, 1.0);
    const double expected = std::exp(-220.0 / *s1.t1_us);
    std::ostringstream d;
    d << "P1(220 us) = " << rho(1, 1).real() << " vs " << expected;
    return CheckLine{"", std::abs(rho(1, 1).real() - expected) < 1e-4, d.str()};
  });
  return out;
}

inline int cmd_validate(const std::string& profile_name, std::ostream& out, std::ostream& err) {
  DeviceParams p;
  try {
    p = load_profile(profile_name);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  bool ok = true;
  for (const auto& c : validation_checks(p)) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    ok = ok && c.pass;
  }
  return ok ? kExitOk : kExitConfig;
}

}  // namespace aqec::cli
