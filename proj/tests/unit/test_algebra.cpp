#include <gtest/gtest.h>

#include "helpers.hpp"
#include "ncgrad/algebra.hpp"

namespace ncgrad {
namespace {

using test::max_abs;

TracialAlgebra two_blocks() { return TracialAlgebra({2, 1}, {0.6, 0.4}); }

TEST(Algebra, TraceOfIdentityIsOne) {
  for (const auto& alg : {TracialAlgebra::full(3), two_blocks()}) {
    EXPECT_NEAR(alg.trace(alg.identity()).real(), 1.0, 1e-14);
  }
}

TEST(Algebra, RejectsBadWeights) {
  EXPECT_ANY_THROW(TracialAlgebra({2}, {0.3}));
  EXPECT_ANY_THROW(TracialAlgebra({2, 2}, {0.25, -0.25}));
}

TEST(Algebra, GnsCoordinatesAreIsometric) {
  Rng rng = test::rng_for(10);
  const TracialAlgebra alg = two_blocks();
  for (int i = 0; i < 20; ++i) {
    const Matrix x = alg.pinch(random_gaussian(alg.dim(), alg.dim(), rng));
    const Matrix y = alg.pinch(random_gaussian(alg.dim(), alg.dim(), rng));
    const Complex direct = alg.trace(x.adjoint() * y);
    EXPECT_LT(std::abs(alg.gns_inner(x, y) - direct), 1e-12);
    EXPECT_LT(std::abs(alg.to_gns(x).dot(alg.to_gns(y)) - direct), 1e-12);
    EXPECT_LT(max_abs(alg.from_gns(alg.to_gns(x)) - x), 1e-13);
  }
}

TEST(Algebra, MultiplicationSuperopsAgree) {
  Rng rng = test::rng_for(11);
  const TracialAlgebra alg = two_blocks();
  const Matrix a = alg.pinch(random_gaussian(3, 3, rng));
  const Matrix x = alg.pinch(random_gaussian(3, 3, rng));
  EXPECT_LT(max_abs(alg.from_gns(alg.left_multiplication(a) * alg.to_gns(x)) - a * x), 1e-12);
  EXPECT_LT(max_abs(alg.from_gns(alg.right_multiplication(a) * alg.to_gns(x)) - x * a), 1e-12);
  // Adjoint of L(a) in GNS coordinates is L(a^dagger).
  EXPECT_LT(max_abs(alg.left_multiplication(a).adjoint() - alg.left_multiplication(a.adjoint())), 1e-12);
}

TEST(Algebra, SubalgebraExpectationProperties) {
  Rng rng = test::rng_for(12);
  const TracialAlgebra alg = TracialAlgebra::full(3);
  Matrix p3 = Matrix::Zero(3, 3);
  p3(0, 0) = 1.0;
  const Subalgebra sub = Subalgebra::generated_by(alg, {p3});
  EXPECT_EQ(sub.dim(), 2);
  for (int i = 0; i < 10; ++i) {
    const Matrix x = random_gaussian(3, 3, rng);
    const Matrix ex = sub.expectation(x);
    EXPECT_TRUE(sub.contains(ex));
    EXPECT_LT(max_abs(sub.expectation(ex) - ex), 1e-12);                       // idempotent
    EXPECT_LT(std::abs(alg.trace(ex) - alg.trace(x)), 1e-12);                   // trace preserving
    const Matrix n = sub.expectation(random_gaussian(3, 3, rng));
    EXPECT_LT(max_abs(sub.expectation(n * x) - n * ex), 1e-12);               // bimodule
  }
  EXPECT_EQ(Subalgebra::scalars(alg).dim(), 1);
  EXPECT_EQ(Subalgebra::whole(alg).dim(), 9);
}

TEST(Algebra, DensityValidation) {
  const TracialAlgebra alg = TracialAlgebra::full(2);
  EXPECT_NO_THROW((void)DensityOperator::from_matrix(alg, test::diag2(1.5, 0.5)));
  EXPECT_THROW((void)DensityOperator::from_matrix(alg, test::diag2(2.5, -0.5)), NumericalError);
  EXPECT_THROW((void)DensityOperator::from_matrix(alg, test::diag2(1.0, 0.5)), NumericalError);
  const auto rho = DensityOperator::normalized(alg, test::diag2(3.0, 1.0));
  EXPECT_LT(max_abs(rho.matrix() - test::diag2(1.5, 0.5)), 1e-14);
  EXPECT_LT(max_abs(DensityOperator::trace_state(alg).matrix() - alg.identity()), 1e-15);
}

TEST(Algebra, SamplersProduceDensities) {
  Rng rng = test::rng_for(13);
  const TracialAlgebra alg = two_blocks();
  for (int i = 0; i < 10; ++i) {
    const auto w = wishart_density(alg, rng);
    EXPECT_NEAR(alg.trace(w.matrix()).real(), 1.0, 1e-12);
    EXPECT_GT(alg.min_eigenvalue(w.matrix()), 0.0);
    const auto s = near_singular_density(alg, rng);
    EXPECT_NEAR(alg.trace(s.matrix()).real(), 1.0, 1e-12);
    EXPECT_LT(alg.min_eigenvalue(s.matrix()), 1e-5);
  }
}

TEST(Algebra, TensorTraceFactorizes) {
  Rng rng = test::rng_for(14);
  const TracialAlgebra a = TracialAlgebra::full(2);
  const TracialAlgebra b = TracialAlgebra::full(3);
  const TracialAlgebra ab = tensor(a, b);
  const Matrix x = random_gaussian(2, 2, rng);
  const Matrix y = random_gaussian(3, 3, rng);
  EXPECT_LT(std::abs(ab.trace(kron(x, y)) - a.trace(x) * b.trace(y)), 1e-13);
}

TEST(Algebra, FunctionalCalculusBlockwise) {
  const TracialAlgebra alg = two_blocks();
  Matrix x = Matrix::Zero(3, 3);
  x(0, 0) = 4.0;
  x(1, 1) = 9.0;
  x(2, 2) = 16.0;
  const Matrix r = alg.apply_function(x, [](double v) { return std::sqrt(v); });
  EXPECT_NEAR(r(0, 0).real(), 2.0, 1e-14);
  EXPECT_NEAR(r(2, 2).real(), 4.0, 1e-14);
  EXPECT_NEAR(alg.min_eigenvalue(x), 4.0, 1e-14);
}

}  // namespace
}  // namespace ncgrad
