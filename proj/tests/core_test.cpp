#include <gtest/gtest.h>

#include <random>

#include "aqec/core/layout.hpp"
#include "aqec/core/matrix.hpp"
#include "aqec/core/partial_trace.hpp"
#include "aqec/quantum/operators.hpp"

using namespace aqec;

namespace {

Matrix random_hermitian(int d, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(n(rng), n(rng));
  Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return h * (scale / es.eigenvalues().cwiseAbs().maxCoeff());
}

Matrix random_density(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(n(rng), n(rng));
  Matrix r = a * a.adjoint();
  return r / r.trace();
}

}  // namespace

TEST(Kron, IdentityLeftGivesBlockDiagonal) {
  const Matrix k = kron(identity(2), pauli_z());
  Matrix expected = Matrix::Zero(4, 4);
  expected.diagonal() << 1, -1, 1, -1;
  EXPECT_LT(max_abs(k - expected), 1e-15);
}

TEST(Kron, IdentityRightRepeatsEntries) {
  const Matrix k = kron(pauli_z(), identity(2));
  Matrix expected = Matrix::Zero(4, 4);
  expected.diagonal() << 1, 1, -1, -1;
  EXPECT_LT(max_abs(k - expected), 1e-15);
}

TEST(Kron, LoweringOnFirstFactor) {
  const Vector in = kron(fock(3, 2), fock(2, 0));
  const Vector out = kron(lowering(3), identity(2)) * in;
  const Vector expected = std::sqrt(2.0) * kron(fock(3, 1), fock(2, 0));
  EXPECT_LT((out - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Kron, Associative) {
  std::mt19937_64 rng(11);
  const Matrix a = random_hermitian(2, 1.0, rng), b = random_hermitian(3, 1.0, rng),
               c = random_hermitian(2, 1.0, rng);
  EXPECT_LT(max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))), 1e-14);
}

TEST(Expm, ZeroGivesIdentity) {
  EXPECT_LT(max_abs(expm(Matrix::Zero(3, 3)) - identity(3)), 1e-15);
}

TEST(Expm, DiagonalPhases) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = kI * 0.3;
  m(1, 1) = kI * -1.7;
  const Matrix e = expm(m);
  EXPECT_NEAR(std::abs(e(0, 0) - std::exp(kI * 0.3)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(e(1, 1) - std::exp(kI * -1.7)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(e(0, 1)), 0.0, 1e-15);
}

TEST(Expm, QuarterTurnAboutX) {
  const Matrix u = expm(-kI * (kPi / 2.0) * pauli_x());
  EXPECT_LT(max_abs(u - (-kI) * pauli_x()), 1e-14);
}

TEST(Expm, GeneralMatrixMatchesSeries) {
  Matrix m(2, 2);
  m << Complex(0.1, 0.2), Complex(0.5, 0.0), Complex(-0.3, 0.1), Complex(0.0, -0.4);
  Matrix series = identity(2), term = identity(2);
  for (int k = 1; k < 30; ++k) {
    term = term * m / static_cast<double>(k);
    series += term;
  }
  EXPECT_LT(max_abs(expm(m) - series), 1e-13);
}

TEST(Expm, RejectsNonSquare) {
  EXPECT_THROW(expm(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST(Expm, InverseProperty) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_hermitian(6, 10.0, rng);
    EXPECT_LT(max_abs(expm(a) * expm(-a) - identity(6)), 1e-9 * std::exp(10.0));
    const Matrix g = -kI * a;
    EXPECT_LT(max_abs(expm(g) * expm(-g) - identity(6)), 1e-9);
  }
}

TEST(Expm, SpectralPathMatchesPade) {
  std::mt19937_64 rng(5);
  const Matrix h = random_hermitian(5, 7.0, rng);
  const Matrix g = -kI * 0.9 * h;
  const Matrix pade = g.exp();
  EXPECT_LT(max_abs(expm(g) - pade), 1e-11);
  EXPECT_LT(max_abs(expm_hermitian(h, 0.9) - pade), 1e-11);
  EXPECT_LT(max_abs(expm(h) - h.exp()), 1e-9 * std::exp(7.0));
}

TEST(Layout, ValidatesModes) {
  EXPECT_THROW(HilbertLayout({{"a", 1}}), std::invalid_argument);
  EXPECT_THROW(HilbertLayout({{"a", 2}, {"a", 3}}), std::invalid_argument);
  const HilbertLayout l({{"q", 2}, {"c", 5}});
  EXPECT_EQ(l.total_dim(), 10u);
  EXPECT_EQ(l.flat_index({1, 3}), 8u);
  EXPECT_EQ(l.digits(8), (std::vector<int>{1, 3}));
  EXPECT_THROW(l.index_of("x"), std::invalid_argument);
}

TEST(PartialTrace, ProductState) {
  std::mt19937_64 rng(1);
  const Matrix rho = random_density(3, rng);
  const HilbertLayout l({{"q", 2}, {"s", 3}});
  const Matrix full = kron(projector(fock(2, 0)), rho);
  EXPECT_LT(max_abs(partial_trace(full, l, {"s"}) - rho), 1e-15);
}

TEST(PartialTrace, BellStateIsMaximallyMixed) {
  const Vector bell =
      (kron(fock(2, 0), fock(2, 0)) + kron(fock(2, 1), fock(2, 1))) / std::sqrt(2.0);
  const HilbertLayout l({{"a", 2}, {"b", 2}});
  EXPECT_LT(max_abs(partial_trace(projector(bell), l, {"a"}) - 0.5 * identity(2)), 1e-15);
}

TEST(PartialTrace, ClassicalMixture) {
  std::mt19937_64 rng(2);
  const Matrix r1 = random_density(3, rng), r2 = random_density(3, rng);
  const HilbertLayout l({{"q", 2}, {"s", 3}});
  const Matrix full = 0.3 * kron(projector(fock(2, 0)), r1) + 0.7 * kron(projector(fock(2, 1)), r2);
  EXPECT_LT(max_abs(partial_trace(full, l, {"s"}) - (0.3 * r1 + 0.7 * r2)), 1e-15);
}

TEST(PartialTrace, KeepsTraceAndOrder) {
  std::mt19937_64 rng(9);
  const HilbertLayout l({{"a", 2}, {"b", 3}, {"c", 2}});
  for (int i = 0; i < 10; ++i) {
    const Matrix rho = random_density(12, rng);
    for (const std::set<std::string>& keep :
         {std::set<std::string>{"a"}, {"b"}, {"a", "c"}, {"b", "c"}}) {
      EXPECT_NEAR(std::abs(partial_trace(rho, l, keep).trace() - rho.trace()), 0.0, 1e-12);
    }
  }
  const Matrix ra = random_density(2, rng), rb = random_density(3, rng);
  const Matrix rc = random_density(2, rng);
  EXPECT_LT(max_abs(partial_trace(kron(kron(ra, rb), rc), l, {"a", "c"}) - kron(ra, rc)), 1e-14);
}

TEST(PartialTrace, Errors) {
  const HilbertLayout l({{"a", 2}, {"b", 2}});
  EXPECT_THROW(partial_trace(identity(3), l, {"a"}), std::invalid_argument);
  EXPECT_THROW(partial_trace(identity(4), l, {"z"}), std::invalid_argument);
}
