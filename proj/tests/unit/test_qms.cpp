#include <gtest/gtest.h>

#include "helpers.hpp"
#include "ncgrad/calculus.hpp"

namespace ncgrad {
namespace {

using test::max_abs;

TEST(Qms, DepolarizingActsAsIdentityMinusTrace) {
  // L x = x - tau(x) 1 for the depolarizing model.
  Rng rng = test::rng_for(20);
  for (const char* name : {"depolarizing2", "depolarizing3"}) {
    const ZooModel model = build_model(name);
    const auto& alg = model.generator.algebra();
    const Matrix x = random_gaussian(alg.dim(), alg.dim(), rng);
    EXPECT_LT(max_abs(model.generator.apply(x) - (x - alg.trace(x) * alg.identity())), 1e-12) << name;
  }
}

TEST(Qms, SemigroupLaw) {
  Rng rng = test::rng_for(21);
  const ZooModel model = build_model("hypercube2");
  const Semigroup p(model.generator);
  const Matrix x = random_gaussian(4, 4, rng);
  EXPECT_LT(max_abs(p.apply(0.3, p.apply(0.4, x)) - p.apply(0.7, x)), 1e-12);
  EXPECT_LT(max_abs(p.apply(0.0, x) - x), 1e-12);
  EXPECT_LT(max_abs(p.apply(2.0, Matrix::Identity(4, 4)) - Matrix::Identity(4, 4)), 1e-12);
}

TEST(Qms, SemigroupMatchesClosedFormForDepolarizing) {
  Rng rng = test::rng_for(22);
  const ZooModel model = build_model("depolarizing3");
  const Semigroup p(model.generator);
  const auto& alg = model.generator.algebra();
  const Matrix x = random_gaussian(3, 3, rng);
  for (double t : {0.01, 0.5, 3.0}) {
    const Matrix expected = std::exp(-t) * x + (1.0 - std::exp(-t)) * alg.trace(x) * alg.identity();
    EXPECT_LT(max_abs(p.apply(t, x) - expected), 1e-12);
  }
}

TEST(Qms, TraceSymmetry) {
  Rng rng = test::rng_for(23);
  for (const auto& entry : catalog()) {
    const ZooModel model = build_model(entry.name);
    const auto& alg = model.generator.algebra();
    const Matrix x = alg.pinch(random_gaussian(alg.dim(), alg.dim(), rng));
    const Matrix y = alg.pinch(random_gaussian(alg.dim(), alg.dim(), rng));
    const Complex lhs = alg.trace(model.generator.apply(x).adjoint() * y);
    const Complex rhs = alg.trace(x.adjoint() * model.generator.apply(y));
    EXPECT_LT(std::abs(lhs - rhs), 1e-10) << entry.name;
  }
}

TEST(Qms, VerifyPassesForZoo) {
  for (const auto& entry : catalog()) {
    const ZooModel model = build_model(entry.name);
    const QmsReport report = verify_qms(model.generator, std::vector<double>{0.1, 1.0});
    EXPECT_TRUE(report.passed) << entry.name;
  }
}

TEST(Qms, RejectsInvalidJumps) {
  const TracialAlgebra alg = TracialAlgebra::full(2);
  Matrix v = Matrix::Zero(2, 2);
  v(0, 1) = 1.0;   // not Hermitian
  EXPECT_THROW(LindbladGenerator(alg, {{1.0, v}}), NumericalError);
  EXPECT_THROW(LindbladGenerator(alg, {{-1.0, test::diag2(1, 0)}}), NumericalError);
}

TEST(Qms, FixedPointAlgebras) {
  const auto depol = fixed_point_algebra(build_model("depolarizing2").generator);
  EXPECT_EQ(depol.algebra.dim(), 1);
  EXPECT_NEAR(depol.spectral_gap, 1.0, 1e-10);
  const auto proj = fixed_point_algebra(build_model("projection2").generator);
  EXPECT_EQ(proj.algebra.dim(), 2);   // diagonal matrices
  EXPECT_TRUE(proj.algebra.contains(test::diag2(3.0, -1.0)));
  EXPECT_NEAR(proj.spectral_gap, 1.0, 1e-10);
  const auto zero = fixed_point_algebra(build_model("zero").generator);
  EXPECT_EQ(zero.algebra.dim(), 4);
  EXPECT_TRUE(std::isinf(zero.spectral_gap));
}

}  // namespace
}  // namespace ncgrad
