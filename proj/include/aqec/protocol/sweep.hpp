#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "aqec/protocol/fit.hpp"
#include "aqec/protocol/free_evolution.hpp"
#include "aqec/protocol/protocol.hpp"

namespace aqec {

struct SweepOptions {
  double horizon = 2000.0;  // us of protocol time per point
  int min_rounds = 3;
  bool perfect_gates = false;  // otherwise per-round errors from the budget model
  BudgetErrorOptions budget;
  int jobs = 1;
};

struct SweepPoint {
  double t_fe = 0.0;
  DecayFit fit;
  std::vector<CycleReport> reports;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::size_t best = 0;  // index of the largest fitted decay time

  double best_t_fe() const { return points.at(best).t_fe; }
};

// Runs one protocol per t_FE and fits the process-fidelity decay time.
inline SweepResult sweep_tfe(const CycleConfig& base, const FreeEvolutionModel& model,
                             const std::vector<double>& t_values, const SweepOptions& opt = {}) {
  if (t_values.empty()) throw std::invalid_argument("sweep_tfe: no t_FE values");
  SweepResult res;
  res.points.resize(t_values.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < t_values.size(); i = next++) {
      try {
        CycleConfig cfg = base;
        cfg.t_fe = t_values[i];
        cfg.errors =
            opt.perfect_gates ? ErrorModel{} : error_model_from_budget(cfg.t_fe, opt.budget);
        const double period = cfg.t_fe + cfg.gate_time;
        cfg.rounds = std::max(opt.min_rounds, static_cast<int>(std::ceil(opt.horizon / period)));
        SweepPoint& p = res.points[i];
        p.t_fe = cfg.t_fe;
        p.reports = run_protocol(cfg, model);
        std::vector<std::pair<double, double>> pts;
        for (const auto& r : p.reports) pts.emplace_back(r.time, r.f_chi);
        p.fit = fit_process_decay(pts);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int jobs = std::clamp(opt.jobs, 1, static_cast<int>(t_values.size()));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  for (std::size_t i = 1; i < res.points.size(); ++i) {
    if (res.points[i].fit.tau > res.points[res.best].fit.tau) res.best = i;
  }
  return res;
}

}  // namespace aqec
