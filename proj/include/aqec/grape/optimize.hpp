#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aqec/grape/lbfgs.hpp"
#include "aqec/grape/model.hpp"
#include "aqec/grape/objective.hpp"
#include "aqec/grape/pulse.hpp"
#include "aqec/grape/targets.hpp"

namespace aqec {

struct GrapeConfig {
  double duration = 1.2;  // us
  double dt = 0.002;      // us
  std::uint64_t seed = 1;
  int max_iters = 2000;
  double tol = 1e-3;             // stop once Phi_0 falls below this
  double init_rms = 2.0;         // rad/us
  double init_sigma = 10.0;      // samples
  std::optional<ShapePenalty> penalty;  // defaults to ShapePenalty::defaults(channels)
};

struct GrapeResult {
  PulseGrid pulse;
  std::vector<double> history;  // Phi_tot per accepted iteration
  double phi0 = 1.0;
  double shape = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

inline GrapeResult optimize(const TargetSet& targets, const ControlModel& model,
                            const GrapeConfig& cfg) {
  model.validate();
  targets.validate();
  const Eigen::Index n = samples_for(cfg.duration, cfg.dt);
  const ShapePenalty pen = cfg.penalty.value_or(ShapePenalty::defaults(model.channels.size()));
  PulseGrid work = smooth_noise_pulse(cfg.dt, model.channels, n, cfg.init_rms,
                                      cfg.init_sigma, cfg.seed);
  double last_phi0 = 1.0;
  ObjectiveFn fn = [&](const RealVector& x, RealVector& g) {
    work.assign(x);
    const GrapeEvaluation ev = evaluate(model, targets, work, pen, true);
    PulseGrid gp = work;
    gp.values = ev.gradient;
    g = gp.flatten();
    last_phi0 = ev.phi0;
    return ev.total;
  };
  LbfgsOptions opt;
  opt.max_iters = cfg.max_iters;
  opt.grad_tol = 1e-12;
  opt.stop = [&](double) { return last_phi0 < cfg.tol; };
  const LbfgsResult r = lbfgs_minimize(fn, work.flatten(), opt);

  GrapeResult out;
  out.pulse = work;
  out.pulse.assign(r.x);
  const GrapeEvaluation fin = evaluate(model, targets, out.pulse, pen, false);
  out.phi0 = fin.phi0;
  out.shape = fin.shape;
  out.history = r.history;
  out.iterations = r.iterations;
  out.converged = fin.phi0 < cfg.tol;
  out.message = r.message;
  return out;
}

}  // namespace aqec
