#include <gtest/gtest.h>

#include "helpers.hpp"
#include "ncgrad/gradest.hpp"

namespace ncgrad {
namespace {

using test::max_abs;

TEST(Zoo, CatalogBuildsWithAttachedConstants) {
  for (const auto& entry : catalog()) {
    const ZooModel model = build_model(entry.name);
    EXPECT_EQ(model.name, entry.name);
    EXPECT_EQ(model.proven_k, entry.proven_k);
    EXPECT_FALSE(model.reference.empty());
  }
  EXPECT_THROW((void)build_model("nonexistent"), std::invalid_argument);
  EXPECT_THROW((void)build_model("cyclic", {{"m", "4"}}), std::invalid_argument);
  EXPECT_THROW((void)build_model("hypercube", {{"d", "4"}}), std::invalid_argument);
}

TEST(Zoo, CyclicEigenRelation) {
  for (int n : {2, 4, 6, 8}) {
    const GroupLindblad model = cyclic_group_model(n);
    for (int k = 0; k < n; ++k) {
      const double psi = std::min(k, n - k);
      EXPECT_NEAR(model.group.psi(k), psi, 1e-12);
      const Matrix& lambda = model.group.lambda[static_cast<std::size_t>(k)];
      EXPECT_LT(max_abs(model.generator.apply(lambda) - psi * lambda), 1e-10) << n << " " << k;
    }
    EXPECT_TRUE(model.group.warnings.empty());
    EXPECT_TRUE(model.group.projections);
  }
  EXPECT_THROW((void)cyclic_group_model(5), std::invalid_argument);
  EXPECT_THROW((void)cyclic_group_model(10), std::invalid_argument);
}

TEST(Zoo, SymmetricGroupHammingEigenRelation) {
  for (int n : {3, 4}) {
    const GroupLindblad model = symmetric_group_model(n);
    const auto perms = permutations(n);
    ASSERT_EQ(model.group.order(), static_cast<int>(perms.size()));
    for (std::size_t s = 0; s < perms.size(); ++s) {
      int moved = 0;
      for (int i = 0; i < n; ++i) moved += perms[s][static_cast<std::size_t>(i)] != i;
      const Matrix& lambda = model.group.lambda[s];
      EXPECT_LT(max_abs(model.generator.apply(lambda) - moved * lambda), 1e-10);
    }
  }
  const auto p3 = permutations(3);
  EXPECT_EQ(p3.size(), 6u);
  EXPECT_EQ(p3.front(), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(p3.back(), (std::vector<int>{2, 1, 0}));
}

TEST(Zoo, CayleyTableValidation) {
  // Z_3 table with a broken entry.
  std::vector<std::vector<int>> table = {{0, 1, 2}, {1, 2, 0}, {2, 0, 0}};
  const std::vector<RealVector> b(3, RealVector::Zero(1));
  EXPECT_THROW((void)group_lindblad_from_cocycle(table, b, {1.0}), std::invalid_argument);
  table[2][2] = 1;
  EXPECT_NO_THROW((void)group_lindblad_from_cocycle(table, b, {1.0}));
}

TEST(Zoo, NonCocycleDataWarns) {
  // b = (0, 1, 2, 1) on Z_4: (b(2 + h) - b(h))^2 depends on h, so lambda_2
  // is not an eigenvector.
  std::vector<std::vector<int>> table(4, std::vector<int>(4));
  for (int a = 0; a < 4; ++a) {
    for (int c = 0; c < 4; ++c) table[a][c] = (a + c) % 4;
  }
  std::vector<RealVector> b(4, RealVector::Zero(1));
  b[1](0) = 1.0;
  b[2](0) = 2.0;
  b[3](0) = 1.0;
  const auto model = group_lindblad_from_cocycle(table, b, {1.0});
  EXPECT_GT(model.group.eigen_residual, 1e-8);
  EXPECT_FALSE(model.group.warnings.empty());
}

TEST(Zoo, ProjectionValidation) {
  const TracialAlgebra alg = TracialAlgebra::full(2);
  Matrix plus = Matrix::Constant(2, 2, 0.5);
  EXPECT_THROW((void)commuting_projections_model(alg, {test::diag2(1, 0), plus}), std::invalid_argument);
  EXPECT_THROW((void)commuting_projections_model(alg, {test::diag2(2, 0)}), std::invalid_argument);
  EXPECT_NO_THROW((void)commuting_projections_model(alg, {test::diag2(1, 0), test::diag2(0, 1)}));
}

TEST(Zoo, ConditionalExpectationModelIsIdentityMinusE) {
  Rng rng = test::rng_for(70);
  const TracialAlgebra alg = TracialAlgebra::full(3);
  Matrix p = Matrix::Zero(3, 3);
  p(0, 0) = 1.0;
  const Subalgebra sub = Subalgebra::generated_by(alg, {p});
  const auto gen = conditional_expectation_model(alg, sub);
  for (int i = 0; i < 5; ++i) {
    const Matrix x = random_gaussian(3, 3, rng);
    EXPECT_LT(max_abs(gen.apply(x) - (x - sub.expectation(x))), 1e-10);
  }
}

TEST(Zoo, HypercubeFormula) {
  Rng rng = test::rng_for(71);
  for (int d : {1, 2, 3}) {
    const auto gen = hypercube_model(d);
    const int n = 1 << d;
    const Matrix a = random_gaussian(n, n, rng);
    Matrix expected = Matrix::Zero(n, n);
    for (const auto& jump : gen.jumps()) expected += 0.5 * (a - jump.v * a * jump.v);
    EXPECT_LT(max_abs(gen.apply(a) - expected), 1e-12);
    EXPECT_EQ(static_cast<int>(gen.jumps().size()), d);
  }
}

TEST(Zoo, TwoPointModelRestriction) {
  const auto model = two_point_model(1, 3);
  EXPECT_EQ(model.restriction.dim(), 2);
  const GradientSetup setup(model.generator, model.restriction);
  EXPECT_EQ(setup.form_dim(), 2);
  EXPECT_THROW((void)two_point_model(0, 3), std::invalid_argument);
}

}  // namespace
}  // namespace ncgrad
