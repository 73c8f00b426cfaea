#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "aqec/codes/binomial.hpp"
#include "aqec/codes/recovery.hpp"
#include "aqec/quantum/channel.hpp"
#include "aqec/quantum/fidelity.hpp"
#include "aqec/quantum/operators.hpp"
#include "aqec/quantum/process.hpp"
#include "aqec/quantum/wigner.hpp"

using namespace aqec;

namespace {

Matrix random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(n(rng), n(rng));
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ();
}

Matrix random_density(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(n(rng), n(rng));
  Matrix r = a * a.adjoint();
  return r / r.trace();
}

QuantumChannel total_dephasing() {
  return QuantumChannel({std::sqrt(0.5) * identity(2), std::sqrt(0.5) * pauli_z()});
}

Matrix swap_gate() {
  Matrix s = Matrix::Zero(4, 4);
  s(0, 0) = s(3, 3) = 1.0;
  s(1, 2) = s(2, 1) = 1.0;
  return s;
}

}  // namespace

TEST(ModeOperator, NumberOnTopLevel) {
  const HilbertLayout l({{"c", 5}});
  const Matrix n = mode_operator(l, "c", ModeOp::number());
  EXPECT_LT((n * fock(5, 4) - 4.0 * fock(5, 4)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ModeOperator, LowerAnnihilatesVacuum) {
  const HilbertLayout l({{"c", 5}});
  EXPECT_LT((mode_operator(l, "c", ModeOp::lower()) * fock(5, 0)).norm(), 1e-15);
}

TEST(ModeOperator, LadderProducts) {
  const HilbertLayout l({{"c", 6}});
  const Matrix a = mode_operator(l, "c", ModeOp::lower());
  const Matrix ad = mode_operator(l, "c", ModeOp::raise());
  const Vector k3 = fock(6, 3);
  EXPECT_LT((ad * a * k3 - 3.0 * k3).norm(), 1e-14);
  EXPECT_LT((a * ad * k3 - 4.0 * k3).norm(), 1e-14);
}

TEST(ModeOperator, EmbedsWithIdentities) {
  const HilbertLayout l({{"q", 2}, {"c", 3}});
  const Matrix z = mode_operator(l, "q", ModeOp::sigma_z());
  EXPECT_LT(max_abs(z - kron(pauli_z(), identity(3))), 1e-15);
  const Matrix p = mode_operator(l, "c", ModeOp::projector(2));
  EXPECT_NEAR(p.trace().real(), 2.0, 1e-15);
}

TEST(ModeOperator, PauliRequiresQubit) {
  const HilbertLayout l({{"c", 3}});
  EXPECT_THROW(mode_operator(l, "c", ModeOp::sigma_x()), std::invalid_argument);
  EXPECT_THROW(mode_operator(l, "c", ModeOp::projector(3)), std::invalid_argument);
  EXPECT_THROW(embed(l, "c", identity(2)), std::invalid_argument);
}

TEST(Dilation, IdentityGivesIdentityChannel) {
  const HilbertLayout l({{"a", 2}, {"q", 2}});
  const auto ch = channel_from_dilation(identity(4), l, "a", 0);
  ASSERT_EQ(ch.kraus().size(), 1u);
  EXPECT_LT(max_abs(ch.kraus()[0] - identity(2)), 1e-15);
}

TEST(Dilation, SwapWithGroundAncillaResets) {
  const HilbertLayout l({{"a", 2}, {"q", 2}});
  const auto ch = channel_from_dilation(swap_gate(), l, "a", 0);
  EXPECT_EQ(ch.kraus().size(), 2u);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5; ++i) {
    EXPECT_LT(max_abs(ch.apply(random_density(2, rng)) - projector(fock(2, 0))), 1e-14);
  }
}

TEST(Dilation, IdealRecoveryRestoresErrorWord) {
  const auto code = binomial_code(8);
  const HilbertLayout l({{"q", 2}, {"c", 8}});
  const Matrix u = ideal_recovery_unitary(code, DeformedFrame{}, l);
  const auto ch = channel_from_dilation(u, l, "q", 0);
  const Matrix out = ch.apply(projector(fock(8, 3)));
  EXPECT_NEAR(state_fidelity(code.zero_l, out), 1.0, 1e-12);
}

TEST(Dilation, RejectsNonUnitary) {
  const HilbertLayout l({{"a", 2}, {"q", 2}});
  EXPECT_THROW(channel_from_dilation(2.0 * identity(4), l, "a", 0), std::invalid_argument);
}

TEST(Dilation, RandomUnitariesAreCptp) {
  std::mt19937_64 rng(8);
  const HilbertLayout l({{"a", 3}, {"q", 2}, {"c", 2}});
  for (int i = 0; i < 10; ++i) {
    const auto ch = channel_from_dilation(random_unitary(12, rng), l, "a", i % 3);
    EXPECT_LT(ch.completeness_error(), 1e-9);
    EXPECT_GT(ch.min_choi_eigenvalue(), -1e-9);
    const Matrix rho = random_density(4, rng);
    const Matrix out = ch.apply(rho);
    EXPECT_NEAR(std::abs(out.trace() - Complex(1.0)), 0.0, 1e-9);
    EXPECT_LT(hermiticity_error(out), 1e-10);
  }
}

TEST(Channel, SuperoperatorAndChoiRoundTrip) {
  std::mt19937_64 rng(2);
  const HilbertLayout l({{"a", 2}, {"q", 3}});
  const auto ch = channel_from_dilation(random_unitary(6, rng), l, "a", 0);
  const auto back = QuantumChannel::from_superoperator(ch.superoperator(), 3, 3);
  EXPECT_LT(max_abs(back.superoperator() - ch.superoperator()), 1e-12);
  const auto from_choi = QuantumChannel::from_choi(ch.choi(), 3, 3);
  const Matrix rho = random_density(3, rng);
  EXPECT_LT(max_abs(from_choi.apply(rho) - ch.apply(rho)), 1e-12);
}

TEST(Channel, ComposeAppliesFirstThenSecond) {
  const auto x = QuantumChannel::unitary(pauli_x());
  const auto reset =
      channel_from_dilation(swap_gate(), HilbertLayout({{"a", 2}, {"q", 2}}), "a", 0);
  const Matrix out = compose(x, reset).apply(projector(fock(2, 0)));
  EXPECT_LT(max_abs(out - projector(fock(2, 1))), 1e-14);
}

TEST(StateFidelity, Examples) {
  const Matrix p0 = projector(fock(2, 0)), p1 = projector(fock(2, 1));
  EXPECT_NEAR(state_fidelity(p0, p0), 1.0, 1e-12);
  EXPECT_NEAR(state_fidelity(p0, p1), 0.0, 1e-12);
  const Vector plus = (fock(2, 0) + fock(2, 1)) / std::sqrt(2.0);
  EXPECT_NEAR(state_fidelity(projector(plus), 0.5 * identity(2)), 0.5, 1e-12);
  EXPECT_NEAR(state_fidelity(plus, 0.5 * identity(2)), 0.5, 1e-12);
}

TEST(StateFidelity, SymmetricAndPureReduction) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    const Matrix a = random_density(4, rng), b = random_density(4, rng);
    EXPECT_NEAR(state_fidelity(a, b), state_fidelity(b, a), 1e-9);
    const Vector psi = random_unitary(4, rng).col(0);
    EXPECT_NEAR(state_fidelity(projector(psi), b), (psi.adjoint() * b * psi)(0, 0).real(), 1e-9);
  }
}

TEST(StateFidelity, RejectsBadTrace) {
  EXPECT_THROW(state_fidelity(identity(2), identity(2)), std::invalid_argument);
  EXPECT_THROW(state_fidelity(Matrix(identity(2) / 2.0), Matrix(identity(3) / 3.0)),
               std::invalid_argument);
}

TEST(ProcessTomography, KnownChannels) {
  const auto inputs = cardinal_states();
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  EXPECT_LT(max_abs(process_tomography(QuantumChannel::identity(2), inputs).chi - expected), 1e-12);

  expected.setZero();
  expected(0, 0) = expected(3, 3) = 0.5;
  EXPECT_LT(max_abs(process_tomography(total_dephasing(), inputs).chi - expected), 1e-12);

  expected.setZero();
  expected(1, 1) = 1.0;
  EXPECT_LT(max_abs(process_tomography(QuantumChannel::unitary(pauli_x()), inputs).chi - expected),
            1e-12);
}

TEST(ProcessTomography, MatchesChoiConstruction) {
  std::mt19937_64 rng(6);
  const HilbertLayout l({{"a", 2}, {"q", 2}});
  for (int i = 0; i < 5; ++i) {
    const auto ch = channel_from_dilation(random_unitary(4, rng), l, "a", 0);
    const auto a = process_tomography(ch, cardinal_states());
    EXPECT_LT(max_abs(a.chi - chi_matrix(ch).chi), 1e-12);
    EXPECT_NEAR(a.chi.trace().real(), 1.0, 1e-12);
    EXPECT_LT(hermiticity_error(a.chi), 1e-12);
  }
}

TEST(ProcessTomography, RejectsRankDeficientInputs) {
  const auto all = cardinal_states();
  const std::vector<Matrix> three(all.begin(), all.begin() + 3);
  EXPECT_THROW(process_tomography(QuantumChannel::identity(2), three), std::invalid_argument);
}

TEST(ProcessFidelity, Examples) {
  const auto id = identity_process(2);
  EXPECT_NEAR(process_fidelity(id, id), 1.0, 1e-12);
  EXPECT_NEAR(process_fidelity(id, chi_matrix(total_dephasing())), 0.5, 1e-12);
  EXPECT_NEAR(process_fidelity(id, chi_matrix(QuantumChannel::unitary(pauli_x()))), 0.0, 1e-12);
}

TEST(ProcessFidelity, MaximallyMixedOutputGivesQuarter) {
  const auto depolarize = QuantumChannel({0.5 * identity(2), 0.5 * pauli_x(), 0.5 * pauli_y(),
                                          0.5 * pauli_z()});
  EXPECT_NEAR(process_fidelity(identity_process(2), chi_matrix(depolarize)), 0.25, 1e-12);
}

TEST(ProcessFidelity, SymmetricAndUnitOnlyForEqualUnitaries) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10; ++i) {
    const auto a = chi_matrix(QuantumChannel::unitary(random_unitary(2, rng)));
    const auto b = chi_matrix(QuantumChannel::unitary(random_unitary(2, rng)));
    EXPECT_NEAR(process_fidelity(a, b), process_fidelity(b, a), 1e-12);
    EXPECT_NEAR(process_fidelity(a, a), 1.0, 1e-12);
    EXPECT_LT(process_fidelity(a, b), 1.0 - 1e-6);
  }
}

TEST(Wigner, VacuumAndSinglePhotonAtOrigin) {
  const auto w0 = wigner(projector(fock(8, 0)), {Complex(0.0, 0.0)});
  EXPECT_NEAR(w0[0], 2.0 / kPi, 1e-12);
  const auto w1 = wigner(projector(fock(8, 1)), {Complex(0.0, 0.0)});
  EXPECT_NEAR(w1[0], -2.0 / kPi, 1e-12);
}

TEST(Wigner, VacuumIsGaussian) {
  const Complex alpha(0.7, -0.4);
  const auto w = wigner(projector(fock(8, 0)), {alpha});
  EXPECT_NEAR(w[0], 2.0 / kPi * std::exp(-2.0 * std::norm(alpha)), 1e-10);
}

TEST(Wigner, GridIntegralIsOne) {
  const auto code = binomial_code(8);
  const double extent = 4.0;
  const int n = 41;
  const auto grid = square_grid(extent, n);
  const auto w = wigner(projector(code.zero_l), grid);
  const double step = 2.0 * extent / (n - 1);
  double sum = 0.0;
  for (double v : w) sum += v;
  EXPECT_NEAR(sum * step * step, 1.0, 0.01);
}

TEST(Wigner, BoundedForPhysicalStates) {
  std::mt19937_64 rng(21);
  const auto grid = square_grid(2.0, 7);
  for (int i = 0; i < 3; ++i) {
    for (double v : wigner(random_density(8, rng), grid)) {
      EXPECT_LE(std::abs(v), 2.0 / kPi + 1e-12);
    }
  }
}

TEST(Wigner, RejectsTooSmallTruncation) {
  WignerOptions opt;
  opt.padding = 1;
  EXPECT_THROW(wigner(projector(fock(8, 7)), {Complex(3.0, 0.0)}, opt), std::invalid_argument);
}

TEST(Wigner, CsvHasUnitsAndHeader) {
  std::ostringstream os;
  write_wigner_csv(os, {Complex(0.0, 0.0)}, {0.5});
  EXPECT_EQ(os.str().rfind("# re_alpha", 0), 0u);
  EXPECT_NE(os.str().find("re_alpha,im_alpha,W\n0,0,0.5"), std::string::npos);
}
