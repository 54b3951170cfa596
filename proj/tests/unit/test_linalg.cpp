#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "helpers.hpp"
#include "ncgrad/linalg.hpp"

namespace ncgrad {
namespace {

using test::max_abs;

TEST(Linalg, EigHermitianReconstructs) {
  Rng rng = test::rng_for(1);
  for (int n : {1, 2, 5, 9}) {
    const Matrix a = random_hermitian(n, rng);
    const auto spec = eig_hermitian(a);
    EXPECT_LT(max_abs(spec.reconstruct() - a), 1e-12);
    for (Index k = 1; k < spec.dim(); ++k) EXPECT_LE(spec.eigenvalues(k - 1), spec.eigenvalues(k));
  }
}

TEST(Linalg, EigHermitianSymmetrizesInput) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  const auto spec = eig_hermitian(a);
  EXPECT_NEAR(spec.eigenvalues(0), -0.5, 1e-15);
  EXPECT_NEAR(spec.eigenvalues(1), 0.5, 1e-15);
  EXPECT_THROW((void)eig_hermitian(Matrix::Zero(2, 3)), NumericalError);
}

TEST(Linalg, MatrixExponentialMatchesEigen) {
  Rng rng = test::rng_for(2);
  const Matrix a = random_hermitian(4, rng);
  const Matrix mine = matrix_function(a, [](double x) { return std::exp(x); });
  const Matrix theirs = a.exp();
  EXPECT_LT(max_abs(mine - theirs), 1e-10 * (1.0 + max_abs(theirs)));
}

TEST(Linalg, PsdCheckSeparatesCones) {
  Rng rng = test::rng_for(3);
  const Matrix g = random_gaussian(4, 4, rng);
  const Matrix psd = g * g.adjoint();
  EXPECT_TRUE(psd_check(psd, 1e-10).psd);
  EXPECT_FALSE(psd_check(-psd, 1e-10).psd);
}

TEST(Linalg, KronAndVectorize) {
  Rng rng = test::rng_for(4);
  const Matrix a = random_gaussian(2, 3, rng);
  const Matrix b = random_gaussian(3, 2, rng);
  const Matrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 6);
  ASSERT_EQ(k.cols(), 6);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 3; ++j) EXPECT_LT(max_abs(k.block(3 * i, 2 * j, 3, 2) - a(i, j) * b), 1e-15);
  }
  const Matrix x = random_gaussian(3, 3, rng);
  EXPECT_LT(max_abs(devectorize(vectorize(x), 3) - x), 1e-15);
}

TEST(Linalg, PencilOracle) {
  // Diagonal pencil: sup a_i / b_i over b_i > 0.
  Matrix a = Matrix::Zero(3, 3);
  Matrix b = Matrix::Zero(3, 3);
  a(0, 0) = 2.0;
  a(1, 1) = 3.0;
  b(0, 0) = 1.0;
  b(1, 1) = 4.0;
  const auto r = largest_generalized_eigenvalue(a, b);
  EXPECT_EQ(r.status, PencilResult::Status::finite);
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  EXPECT_EQ(r.rank, 2);

  a(2, 2) = 1.0;   // A lives on ker B
  EXPECT_EQ(largest_generalized_eigenvalue(a, b).status, PencilResult::Status::unbounded);
  EXPECT_EQ(largest_generalized_eigenvalue(Matrix::Zero(3, 3), b).status, PencilResult::Status::zero);
}

TEST(Linalg, PencilMatchesRandomRayleighBound) {
  Rng rng = test::rng_for(5);
  const Matrix ga = random_gaussian(5, 5, rng);
  const Matrix gb = random_gaussian(5, 5, rng);
  const Matrix a = ga * ga.adjoint();
  const Matrix b = gb * gb.adjoint() + Matrix::Identity(5, 5);
  const auto r = largest_generalized_eigenvalue(a, b);
  // No Rayleigh quotient exceeds it; the maximizer attains it.
  for (int i = 0; i < 200; ++i) {
    const Vector x = random_gaussian(5, 1, rng);
    EXPECT_LE(x.dot(a * x).real() / x.dot(b * x).real(), r.value * (1 + 1e-12));
  }
  const Vector& m = r.maximizer;
  EXPECT_NEAR(m.dot(a * m).real() / m.dot(b * m).real(), r.value, 1e-9 * r.value);
}

}  // namespace
}  // namespace ncgrad
