#include <gtest/gtest.h>

#include <random>

#include "aqec/device/profile.hpp"
#include "aqec/protocol/fit.hpp"
#include "aqec/protocol/free_evolution.hpp"
#include "aqec/protocol/lindblad.hpp"
#include "aqec/protocol/protocol.hpp"
#include "aqec/protocol/studies.hpp"
#include "aqec/protocol/sweep.hpp"
#include "aqec/rate/rate_model.hpp"

using namespace aqec;

namespace {

FreeEvolutionModel bare_model(double kappa, int dim = 8) {
  FreeEvolutionModel m;
  m.dim = dim;
  m.kappa = kappa;
  m.spectrum.assign(static_cast<std::size_t>(dim), 0.0);
  return m;
}

FreeEvolutionModel default_model(bool pass = true) {
  FreeModelOptions opt;
  opt.pass_enabled = pass;
  return free_model_from_profile(default_profile(), opt);
}

Matrix random_density(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(n(rng), n(rng));
  Matrix r = a * a.adjoint();
  return r / r.trace();
}

std::vector<std::pair<double, double>> synthetic_curve(double tau, int rounds, double step) {
  std::vector<std::pair<double, double>> pts;
  for (int r = 0; r < rounds; ++r) {
    const double t = r * step;
    pts.emplace_back(t, 0.75 * std::exp(-t / tau) + 0.25);
  }
  return pts;
}

}  // namespace

TEST(Lindblad, FockDecay) {
  CollapseSet c;
  c.add("loss", lowering(8), 1.0 / 1380.0);
  const Matrix rho = lindblad_propagate(projector(fock(8, 1)), Matrix::Zero(8, 8), c, 220.0, 1.0);
  EXPECT_NEAR(rho(1, 1).real(), std::exp(-220.0 / 1380.0), 1e-4);
  EXPECT_NEAR(rho(1, 1).real(), 0.8526, 1e-4);
  EXPECT_NEAR(std::abs(rho.trace() - Complex(1.0)), 0.0, 1e-9);
}

TEST(Lindblad, NothingHappensWithoutDynamics) {
  std::mt19937_64 rng(1);
  const Matrix rho = random_density(4, rng);
  EXPECT_LT(max_abs(lindblad_propagate(rho, Matrix::Zero(4, 4), CollapseSet{}, 5.0, 0.5) - rho),
            1e-15);
}

TEST(Lindblad, StepSizeViolationRejected) {
  CollapseSet c;
  c.add("loss", lowering(3), 1.0);
  EXPECT_THROW(lindblad_propagate(projector(fock(3, 1)), Matrix::Zero(3, 3), c, 1.0, 0.5),
               std::invalid_argument);
}

TEST(Lindblad, ExactSuperoperatorAgreesWithIntegrator) {
  std::mt19937_64 rng(2);
  const auto m = default_model();
  const Matrix rho = random_density(8, rng);
  const Matrix a = lindblad_propagate(rho, m.hamiltonian(), m.collapse(), 50.0, 0.05);
  const Matrix b = unvec(m.superoperator(50.0) * vec(rho), 8);
  EXPECT_LT(max_abs(a - b), 1e-9);
}

TEST(Lindblad, TimeDependentRabi) {
  const double omega = 2.0;
  TimeDependentHamiltonian h = [&](double t) -> Matrix {
    return 0.5 * omega * std::cos(0.3 * t) * pauli_x();
  };
  const double t = 3.0;
  const Matrix rho = lindblad_propagate(projector(fock(2, 0)), h, CollapseSet{}, t, 0.005, omega);
  // H(t) commutes with itself, so U = exp(-i sigma_x theta) with theta = integral of H.
  const double theta = 0.5 * omega * std::sin(0.3 * t) / 0.3;
  EXPECT_NEAR(rho(1, 1).real(), std::pow(std::sin(theta), 2), 1e-9);
}

TEST(Lindblad, ChannelIsCptp) {
  const auto m = default_model();
  const auto ch = lindblad_channel(m.hamiltonian(), m.collapse(), 220.0);
  EXPECT_LT(ch.completeness_error(), 1e-9);
  EXPECT_GT(ch.min_choi_eigenvalue(), -1e-9);
}

TEST(FreeEvolution, PassSpectrumIsErrorTransparent) {
  const auto m = default_model(true);
  const auto& e = m.spectrum;
  EXPECT_NEAR((e[4] - e[3]) - (e[2] - e[1]), 0.0, 1e-9);
  const auto raw = default_model(false);
  EXPECT_GT(std::abs((raw.spectrum[4] - raw.spectrum[3]) - (raw.spectrum[2] - raw.spectrum[1])),
            1e-3);
  EXPECT_NEAR(m.kappa, 1.0 / 1380.0, 1e-15);
  EXPECT_EQ(m.dephasing, 0.0);
}

TEST(FreeEvolution, SubspacePopulationsAfterWindow) {
  const auto p = subspace_populations(default_model(), 220.0);
  EXPECT_NEAR(p.logical, 0.773, 0.010);
  EXPECT_NEAR(p.error, 0.220, 0.010);
}

TEST(Trotterized, IdentityRecoveryIsFreeEvolution) {
  const auto m = default_model();
  const auto id = QuantumChannel::identity(8);
  const auto ch = trotterized_recovery(1.0 / 20.0, id, 5, m);
  EXPECT_LT(max_abs(ch.superoperator() - m.superoperator(100.0)), 1e-9);
}

// Only double losses defeat the code, so each round costs gamma_c gamma_e tau^2 / 2
// of logical fidelity, as in the rate model.
TEST(Trotterized, ShortIntervalLossMatchesRateModel) {
  const double kappa = 1.0 / 1380.0, tau = 1.0;
  const int rounds = 10;
  const auto m = bare_model(kappa);
  CycleConfig cfg;
  cfg.t_fe = tau;
  cfg.rounds = rounds;
  cfg.gate_time = 0.0;
  const auto reports = run_protocol(cfg, m);
  const double per_round = (1.0 - reports[rounds].f_chi) / rounds;
  RateState s;
  s = apply_correction(evolve_rates(s, rate_params_from_t1(1.0 / kappa, 1.0, tau),
                                    RateOrder::exact), 1.0);
  EXPECT_NEAR(per_round / (1.0 - s.p_c), 1.0, 0.05);
  CycleConfig single = cfg;
  single.rounds = 1;
  const auto ch = trotterized_recovery(1.0 / tau, recovery_channel(single, m), rounds, m);
  EXPECT_LT(ch.completeness_error(), 1e-8);
  EXPECT_GT(ch.min_choi_eigenvalue(), -1e-8);
}

TEST(Protocol, ZeroRoundsIsIdentity) {
  CycleConfig cfg;
  const auto r = run_protocol(cfg, default_model());
  EXPECT_NEAR(r[0].f_chi, 1.0, 1e-12);
  EXPECT_EQ(r[0].time, 0.0);
}

TEST(Protocol, IdealRecoveryWithoutDissipationIsPerfect) {
  auto m = default_model();
  m.kappa = 0.0;
  m.n_th = 0.0;
  CycleConfig cfg;
  cfg.rounds = 6;
  cfg.phi_g = {0.0, 0.2, -0.4, 0.1, 0.9};
  cfg.phi_e = {0.0, -0.3, 0.5, 0.7, -1.2};
  for (const auto& r : run_protocol(cfg, m)) EXPECT_NEAR(r.f_chi, 1.0, 1e-9);
}

TEST(Protocol, OneRoundIntrinsicFidelity) {
  CycleConfig cfg;
  const auto r = run_protocol(cfg, default_model());
  EXPECT_GT(r[1].f_norm, 0.94);
  EXPECT_LT(r[1].f_norm, 0.96);
  EXPECT_NEAR(r[1].time, 226.0, 1e-12);
}

TEST(Protocol, OneRoundWithoutRecoveryOrPass) {
  CycleConfig cfg;
  cfg.recovery = RecoveryKind::none;
  cfg.pass_enabled = false;
  const auto r = run_protocol(cfg, default_model(false));
  EXPECT_NEAR(r[1].f_chi, 0.755, 0.05);
}

TEST(Protocol, CycleChannelsAreCptp) {
  const auto m = default_model();
  for (double t : {50.0, 220.0, 500.0}) {
    CycleConfig cfg;
    cfg.t_fe = t;
    cfg.errors = error_model_from_budget(t);
    const auto ch = cycle_channel(cfg, m);
    EXPECT_LT(ch.completeness_error(), 1e-8);
    EXPECT_GT(ch.min_choi_eigenvalue(), -1e-8);
  }
}

TEST(Protocol, TracePreservedOverTwentyRounds) {
  const auto m = default_model();
  CycleConfig cfg;
  cfg.errors = error_model_from_budget(220.0);
  const auto ch = cycle_channel(cfg, m);
  std::mt19937_64 rng(5);
  Matrix rho = random_density(8, rng);
  for (int i = 0; i < 20; ++i) rho = ch.apply(rho);
  EXPECT_NEAR(std::abs(rho.trace() - Complex(1.0)), 0.0, 1e-9);
}

TEST(Protocol, NoRecoveryDecaysAtLeastAsFast) {
  const auto m = default_model();
  CycleConfig on;
  on.rounds = 8;
  CycleConfig off = on;
  off.recovery = RecoveryKind::none;
  const auto a = run_protocol(on, m), b = run_protocol(off, m);
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_LE(b[i].f_chi, a[i].f_chi + 1e-12);
}

TEST(Protocol, FidelityWithinPhysicalRange) {
  CycleConfig cfg;
  cfg.rounds = 10;
  cfg.errors = error_model_from_budget(220.0);
  for (const auto& r : run_protocol(cfg, default_model())) {
    EXPECT_GE(r.f_chi, 0.25 - 1e-9);
    EXPECT_LE(r.f_chi, 1.0);
    EXPECT_NEAR(r.p_logical + r.p_error + r.p_other, 1.0, 1e-12);
  }
}

TEST(Protocol, ConfigValidation) {
  CycleConfig cfg;
  cfg.rounds = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.rounds = 1;
  cfg.t_fe = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.t_fe = 10.0;
  cfg.recovery = RecoveryKind::unitary;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_THROW(recovery_kind_from_string("magic"), std::invalid_argument);
}

TEST(Protocol, GrapeStyleUnitaryMatchesIdeal) {
  const auto m = default_model();
  CycleConfig ideal;
  ideal.rounds = 3;
  CycleConfig given = ideal;
  given.recovery = RecoveryKind::unitary;
  given.recovery_unitary = ideal_recovery_unitary(binomial_code(8), recovery_frame(ideal, m),
                                                  HilbertLayout({{"Y1", 2}, {"S1", 8}}));
  const auto a = run_protocol(ideal, m), b = run_protocol(given, m);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i].f_chi, b[i].f_chi, 1e-12);
}

TEST(Fit, ExactSyntheticData) {
  const auto f = fit_process_decay(synthetic_curve(800.0, 10, 100.0));
  EXPECT_NEAR(f.tau, 800.0, 800.0 * 1e-9);
  EXPECT_NEAR(f.f0, 0.75, 1e-9);
  EXPECT_FALSE(f.degenerate);
}

TEST(Fit, RecoversLongDecayTime) {
  const auto f = fit_process_decay(synthetic_curve(1627.0, 20, 226.0));
  EXPECT_NEAR(f.tau, 1627.0, 16.27);
}

TEST(Fit, RobustToNoise) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.0, 0.005);
  auto pts = synthetic_curve(1627.0, 20, 226.0);
  for (auto& p : pts) p.second += noise(rng);
  EXPECT_NEAR(fit_process_decay(pts).tau, 1627.0, 0.05 * 1627.0);
}

TEST(Fit, DegenerateAndShortInputs) {
  EXPECT_TRUE(fit_process_decay({{0.0, 0.8}, {1.0, 0.8}, {2.0, 0.8}}).degenerate);
  EXPECT_THROW(fit_process_decay({{0.0, 1.0}, {1.0, 0.9}}), std::invalid_argument);
}

TEST(Sweep, BudgetErrorsGiveInteriorMaximum) {
  std::vector<double> ts;
  for (double t = 50.0; t <= 500.0; t += 50.0) ts.push_back(t);
  SweepOptions opt;
  opt.jobs = 2;
  const auto r = sweep_tfe(CycleConfig{}, default_model(), ts, opt);
  EXPECT_GT(r.best, 0u);
  EXPECT_LT(r.best, ts.size() - 1);
}

TEST(Sweep, PerfectGatesAreMonotone) {
  const std::vector<double> ts = {50.0, 100.0, 200.0, 300.0, 500.0};
  SweepOptions opt;
  opt.perfect_gates = true;
  const auto r = sweep_tfe(CycleConfig{}, default_model(), ts, opt);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    EXPECT_LT(r.points[i].fit.tau, r.points[i - 1].fit.tau);
  }
  EXPECT_EQ(r.best, 0u);
}

TEST(Sweep, RateModelSurrogateOptimum) {
  EXPECT_NEAR(optimal_interval(0.076, 2.0 / 1380.0, 2.0 / 1380.0), 269.0, 1.0);
}

TEST(DirectReset, ExcitedAncillaDephasesSuperpositions) {
  const auto r = direct_reset_study(default_profile());
  EXPECT_NEAR(r.state_fidelity[0], 1.0, 1e-9);
  EXPECT_NEAR(r.state_fidelity[1], 1.0, 1e-9);
  EXPECT_NEAR(r.state_fidelity[2], 0.540, 0.02);
  EXPECT_NEAR(r.state_fidelity[3], 0.531, 0.02);
  EXPECT_NEAR(r.process_fidelity, 0.540, 0.02);
}

TEST(DirectReset, GroundAncillaIsIdentity) {
  DirectResetOptions opt;
  opt.ancilla_excited = false;
  const auto r = direct_reset_study(default_profile(), opt);
  for (double f : r.state_fidelity) EXPECT_NEAR(f, 1.0, 1e-9);
  EXPECT_NEAR(r.process_fidelity, 1.0, 1e-9);
}

TEST(SwapCalibration, PhaseFreeSwap) {
  const auto id = ideal_swap_channel(8, {});
  const auto c = swap_phase_calibration(id, id);
  for (int n = 1; n <= 4; ++n) {
    EXPECT_NEAR(c.phi_g[n], 0.0, 1e-12);
    EXPECT_NEAR(c.phi_e[n], 0.0, 1e-12);
    EXPECT_NEAR(c.fit_g[n].amplitude, 1.0, 1e-12);
    EXPECT_NEAR(c.fit_g[n].offset, 0.5, 1e-12);
  }
}

TEST(SwapCalibration, RecoversInjectedPhase) {
  const auto g = ideal_swap_channel(8, {0.0, 0.0, 0.7, 0.0, 0.0});
  const auto e = ideal_swap_channel(8, {0.0, -0.2, 0.0, 1.3, -2.0});
  const auto c = swap_phase_calibration(g, e);
  EXPECT_NEAR(c.phi_g[2], 0.7, 1e-6);
  EXPECT_NEAR(c.phi_e[1], -0.2, 1e-6);
  EXPECT_NEAR(c.phi_e[3], 1.3, 1e-6);
  EXPECT_NEAR(c.phi_e[4], -2.0, 1e-6);
}

TEST(SwapCalibration, CosineFitOfNoiselessData) {
  std::vector<double> th, p;
  for (int i = 0; i < 12; ++i) {
    th.push_back(kTwoPi * i / 12);
    p.push_back(0.5 * (1.0 + std::cos(th.back() - 0.4)));
  }
  const auto f = fit_cosine(th, p);
  EXPECT_NEAR(f.amplitude, 1.0, 1e-12);
  EXPECT_NEAR(f.offset, 0.5, 1e-12);
  EXPECT_NEAR(f.phase, 0.4, 1e-12);
}

TEST(IdealLimit, ApproachesThreeQuartersOfLifetime) {
  const double kappa = 1.0 / 1380.0;
  const auto pts = ideal_aqec_limit_study(kappa, {0.1, 1.0, 10.0, 100.0, 300.0, 500.0});
  EXPECT_NEAR(pts[0].ratio, 0.75, 0.0075);
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_LT(pts[i].ratio, pts[i - 1].ratio);
}

TEST(IdealLimit, LinearizedEstimate) {
  const double kappa = 1.0 / 1380.0;
  const double t = 0.1 / (2.0 * kappa);
  const auto pts = ideal_aqec_limit_study(kappa, {t});
  EXPECT_NEAR(pts[0].f_linear, 0.95, 1e-12);
}
