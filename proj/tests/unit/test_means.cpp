#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "ncgrad/calculus.hpp"
#include "ncgrad/means.hpp"
#include "ncgrad/reference.hpp"

namespace ncgrad {
namespace {

using test::max_abs;

TEST(Means, ScalarValues) {
  EXPECT_DOUBLE_EQ(OperatorMean(MeanKind::arithmetic)(1, 4), 2.5);
  EXPECT_NEAR(OperatorMean(MeanKind::geometric)(1, 4), 2.0, 1e-15);
  EXPECT_NEAR(OperatorMean(MeanKind::harmonic)(1, 4), 1.6, 1e-15);
  EXPECT_NEAR(OperatorMean(MeanKind::logarithmic)(1, 4), 3.0 / std::log(4.0), 1e-15);
  EXPECT_DOUBLE_EQ(OperatorMean(MeanKind::left)(1, 4), 1.0);
  EXPECT_DOUBLE_EQ(OperatorMean(MeanKind::right)(1, 4), 4.0);
  for (const auto& m : OperatorMean::builtins()) {
    EXPECT_NEAR(m(1.0, 1.0), 1.0, 1e-15) << m.name();
    EXPECT_NEAR(m(2.5, 2.5), 2.5, 1e-14) << m.name();
  }
}

TEST(Means, LogMeanNearDiagonalMatchesOracle) {
  const OperatorMean log(MeanKind::logarithmic);
  for (double eps : {1e-3, 1e-7, 1e-9, 1e-12}) {
    const double s = 1.0 + eps;
    // Oracle: quadrature of int_0^1 s^u 1^{1-u} du.
    const double oracle = reference::integrate([&](double u) { return std::pow(s, u); }, 0.0, 1.0);
    EXPECT_NEAR(log(s, 1.0), oracle, 1e-14) << eps;
  }
  EXPECT_DOUBLE_EQ(log(0.0, 2.0), 0.0);
}

TEST(Means, NamesRoundTrip) {
  for (const auto& m : OperatorMean::builtins()) EXPECT_EQ(OperatorMean::by_name(m.name()).kind(), m.kind());
  EXPECT_THROW((void)OperatorMean::by_name("quadratic"), std::invalid_argument);
  EXPECT_TRUE(OperatorMean(MeanKind::logarithmic).symmetric());
  EXPECT_FALSE(OperatorMean(MeanKind::left).symmetric());
}

TEST(Means, KuboAndoOfCommutingArgumentsIsScalar) {
  Rng rng = test::rng_for(40);
  const Matrix u = random_unitary(3, rng);
  Matrix a = Matrix::Zero(3, 3);
  Matrix b = Matrix::Zero(3, 3);
  const double as[] = {0.5, 1.0, 2.0};
  const double bs[] = {3.0, 0.7, 2.0};
  for (int i = 0; i < 3; ++i) {
    a(i, i) = as[i];
    b(i, i) = bs[i];
  }
  for (const auto& m : OperatorMean::builtins()) {
    Matrix expected = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) expected(i, i) = m(as[i], bs[i]);
    const Matrix got = m.kubo_ando(u * a * u.adjoint(), u * b * u.adjoint());
    EXPECT_LT(max_abs(got - u * expected * u.adjoint()), 1e-12) << m.name();
  }
}

TEST(Means, GeometricKuboAndoIsRiccatiSolution) {
  // A # B solves X A^{-1} X = B.
  Rng rng = test::rng_for(41);
  const Matrix ga = random_gaussian(3, 3, rng);
  const Matrix gb = random_gaussian(3, 3, rng);
  const Matrix a = ga * ga.adjoint() + 0.1 * Matrix::Identity(3, 3);
  const Matrix b = gb * gb.adjoint() + 0.1 * Matrix::Identity(3, 3);
  const Matrix x = OperatorMean(MeanKind::geometric).kubo_ando(a, b);
  EXPECT_LT(max_abs(x * a.inverse() * x - b), 1e-9 * (1.0 + max_abs(b)));
}

TEST(Means, RhoHatMatchesQuadratureOracle) {
  Rng rng = test::rng_for(42);
  const TracialAlgebra alg = TracialAlgebra::full(4);
  for (int i = 0; i < 10; ++i) {
    const auto rho = wishart_density(alg, rng);
    const Matrix xi = random_gaussian(4, 4, rng);
    const Matrix got = RhoHat(OperatorMean(MeanKind::logarithmic), alg, rho.matrix()).apply(xi);
    const Matrix oracle = reference::log_mean_quadrature(rho.matrix(), xi);
    EXPECT_LT(max_abs(got - oracle), 1e-10 * (1.0 + max_abs(oracle)));
  }
}

TEST(Means, RhoHatLeftRightAndArithmetic) {
  Rng rng = test::rng_for(43);
  const TracialAlgebra alg = TracialAlgebra::full(3);
  const auto rho = wishart_density(alg, rng);
  const Matrix xi = random_gaussian(3, 3, rng);
  const Matrix& r = rho.matrix();
  EXPECT_LT(max_abs(RhoHat(OperatorMean(MeanKind::left), alg, r).apply(xi) - r * xi), 1e-12);
  EXPECT_LT(max_abs(RhoHat(OperatorMean(MeanKind::right), alg, r).apply(xi) - xi * r), 1e-12);
  EXPECT_LT(max_abs(RhoHat(OperatorMean(MeanKind::arithmetic), alg, r).apply(xi) - 0.5 * (r * xi + xi * r)), 1e-12);
  // Trace state: rho_hat is the identity for every mean.
  for (const auto& m : OperatorMean::builtins()) {
    EXPECT_LT(max_abs(RhoHat(m, alg, alg.identity()).apply(xi) - xi), 1e-12) << m.name();
  }
}

TEST(Means, RhoHatBlockMatrixIsPsdAndConsistent) {
  Rng rng = test::rng_for(44);
  const TracialAlgebra alg({2, 1}, {0.6, 0.4});
  const auto rho = wishart_density(alg, rng);
  const Matrix xi = alg.pinch(random_gaussian(3, 3, rng));
  for (const auto& m : OperatorMean::builtins()) {
    const RhoHat hat(m, alg, rho.matrix());
    const Matrix block = hat.block_matrix();
    EXPECT_LT(max_abs(block - block.adjoint()), 1e-12);
    EXPECT_GE(eig_hermitian(hermitian_part(block)).eigenvalues.minCoeff(), -1e-12);
    EXPECT_LT((block * alg.to_gns(xi) - alg.to_gns(hat.apply(xi))).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Means, RhoHatRejectsNegativeDensity) {
  const TracialAlgebra alg = TracialAlgebra::full(2);
  EXPECT_THROW(RhoHat(OperatorMean(MeanKind::logarithmic), alg, test::diag2(2.1, -0.1)), NumericalError);
}

TEST(Means, ChainRuleForLogMean) {
  // rho_hat(log rho) reproduces the derivation: [v, rho] = rho_hat [v, log rho].
  Rng rng = test::rng_for(45);
  const TracialAlgebra alg = TracialAlgebra::full(3);
  const auto rho = wishart_density(alg, rng);
  const Matrix v = random_hermitian(3, rng);
  const Matrix log_rho = matrix_function(rho.matrix(), [](double x) { return std::log(x); });
  const Matrix lhs = commutator(v, rho.matrix());
  const Matrix rhs = RhoHat(OperatorMean(MeanKind::logarithmic), alg, rho.matrix()).apply(commutator(v, log_rho));
  EXPECT_LT(max_abs(lhs - rhs), 1e-10);
}

TEST(Means, AxiomAuditPassesForBuiltins) {
  for (const auto& m : OperatorMean::builtins()) {
    const MeanAuditReport report = mean_axiom_audit(m, 100, 3);
    EXPECT_TRUE(report.passed) << m.name() << ": " << report.witness;
    EXPECT_GE(report.monotonicity_margin, -1e-9);
    EXPECT_GE(report.transformer_margin, -1e-9);
    EXPECT_LE(report.normalization_error, 1e-12);
    EXPECT_TRUE(report.symmetry_flag_consistent);
  }
}

}  // namespace
}  // namespace ncgrad
