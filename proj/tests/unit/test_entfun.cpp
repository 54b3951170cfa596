#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "ncgrad/entfun.hpp"

namespace ncgrad {
namespace {

TEST(Entfun, EntropyValues) {
  const TracialAlgebra alg = TracialAlgebra::full(2);
  EXPECT_NEAR(entropy(alg, DensityOperator::trace_state(alg)), 0.0, 1e-15);
  const auto rho = DensityOperator::from_matrix(alg, test::diag2(1.5, 0.5));
  EXPECT_NEAR(entropy(alg, rho), 0.5 * (1.5 * std::log(1.5) + 0.5 * std::log(0.5)), 1e-14);
  const auto pure = DensityOperator::from_matrix(alg, test::diag2(2.0, 0.0));
  EXPECT_NEAR(entropy(alg, pure), std::log(2.0), 1e-14);
}

TEST(Entfun, RelativeEntropyKlein) {
  Rng rng = test::rng_for(60);
  const TracialAlgebra alg({2, 1}, {0.6, 0.4});
  for (int i = 0; i < 20; ++i) {
    const auto rho = wishart_density(alg, rng);
    const auto sigma = wishart_density(alg, rng);
    EXPECT_GE(relative_entropy(alg, rho, sigma), -1e-12);
    EXPECT_NEAR(relative_entropy(alg, rho, rho), 0.0, 1e-12);
  }
  const TracialAlgebra m2 = TracialAlgebra::full(2);
  const auto full = DensityOperator::trace_state(m2);
  const auto pure = DensityOperator::from_matrix(m2, test::diag2(2.0, 0.0));
  EXPECT_TRUE(std::isinf(relative_entropy(m2, full, pure)));
  EXPECT_NEAR(relative_entropy(m2, pure, full), std::log(2.0), 1e-12);
}

TEST(Entfun, EntropyFixPathsAgree) {
  Rng rng = test::rng_for(61);
  for (const char* name : {"depolarizing2", "projection2", "diagonal2", "projections4"}) {
    const ZooModel model = build_model(name);
    const auto fix = fixed_point_algebra(model.generator).algebra;
    for (int i = 0; i < 5; ++i) {
      const auto rho = wishart_density(model.generator.algebra(), rng);
      const auto paths = entropy_fix_paths(fix, rho);
      EXPECT_NEAR(paths.relative, paths.difference, 1e-10) << name;
      EXPECT_GE(paths.relative, -1e-12);
    }
  }
  // Depolarizing: E_fix(rho) = 1, so Ent_fix = Ent.
  const ZooModel depol = build_model("depolarizing3");
  const auto rho = wishart_density(depol.generator.algebra(), rng);
  EXPECT_NEAR(entropy_fix(depol.generator, rho), entropy(depol.generator.algebra(), rho), 1e-12);
}

TEST(Entfun, FisherAnalyticValue) {
  const ZooModel model = build_model("depolarizing2");
  const auto rho = DensityOperator::from_matrix(model.generator.algebra(), test::diag2(1.5, 0.5));
  const auto info = fisher_information(model.generator, rho);
  EXPECT_NEAR(info.value, 0.25 * std::log(3.0), 1e-12);
  EXPECT_TRUE(info.finite);
  EXPECT_FALSE(info.smoothed);
  EXPECT_LT(info.cross_check, 1e-10);
}

TEST(Entfun, FisherNonNegativeAndZeroOnFixedPoints) {
  Rng rng = test::rng_for(62);
  const ZooModel model = build_model("hypercube2");
  for (int i = 0; i < 10; ++i) {
    EXPECT_GE(fisher_information(model.generator, wishart_density(model.generator.algebra(), rng)).value, -1e-12);
  }
  const ZooModel projection = build_model("projection2");
  const auto diag = DensityOperator::from_matrix(projection.generator.algebra(), test::diag2(1.2, 0.8));
  EXPECT_NEAR(fisher_information(projection.generator, diag).value, 0.0, 1e-14);
}

TEST(Entfun, FisherSmoothingFiniteAndDivergent) {
  // A pure fixed point of the projection model: smoothing stays at 0.
  const ZooModel projection = build_model("projection2");
  const auto& alg = projection.generator.algebra();
  const auto pure = DensityOperator::from_matrix(alg, test::diag2(2.0, 0.0));
  const auto fixed = fisher_information(projection.generator, pure);
  EXPECT_TRUE(fixed.smoothed);
  EXPECT_TRUE(fixed.finite);
  EXPECT_NEAR(fixed.value, 0.0, 1e-12);
  // Under depolarizing noise the same state has infinite Fisher information.
  const auto diverge = fisher_information(build_model("depolarizing2").generator, pure);
  EXPECT_TRUE(diverge.smoothed);
  EXPECT_FALSE(diverge.finite);
  EXPECT_TRUE(std::isinf(diverge.value));
  EXPECT_EQ(diverge.smoothed_values.size(), 3u);
}

TEST(Entfun, DeBruijnIdentity) {
  // d/dt Ent(P_t rho) = -I(P_t rho).
  Rng rng = test::rng_for(63);
  for (const char* name : {"depolarizing3", "cyclic4"}) {
    const ZooModel model = build_model(name);
    const GradientSetup setup(model.generator);
    const auto rho = wishart_density(setup.algebra(), rng);
    for (double t : {0.2, 1.0}) {
      const double h = 1e-4;
      const double up = entropy(setup.algebra(), setup.semigroup().apply(t + h, rho));
      const double down = entropy(setup.algebra(), setup.semigroup().apply(t - h, rho));
      const double fisher = fisher_information(model.generator, setup.semigroup().apply(t, rho)).value;
      EXPECT_NEAR(-(up - down) / (2 * h), fisher, 1e-4) << name;
    }
  }
}

TEST(Entfun, FisherDecayCheck) {
  Rng rng = test::rng_for(64);
  const ZooModel model = build_model("depolarizing2");
  std::vector<DensityOperator> densities;
  for (int i = 0; i < 5; ++i) densities.push_back(wishart_density(model.generator.algebra(), rng));
  const std::vector<double> grid = {0.0, 0.5, 1.0, 2.0, 5.0};
  const auto pass = fisher_decay_check(model.generator, 0.5, densities, grid);
  EXPECT_TRUE(pass.pass);
  EXPECT_EQ(pass.points.size(), 25u);
  EXPECT_GE(pass.fitted_exponent, 1.0 - 1e-6);
  EXPECT_FALSE(fisher_decay_check(model.generator, 2.0, densities, grid).pass);
  const auto pure = DensityOperator::from_matrix(model.generator.algebra(), test::diag2(2.0, 0.0));
  EXPECT_THROW((void)fisher_decay_check(model.generator, 0.5, {pure}, grid), std::invalid_argument);
}

TEST(Entfun, MlsiEstimate) {
  MlsiConfig config;
  config.samples = 40;
  config.seed = 2;
  const auto estimate = mlsi_estimate(GradientSetup(build_model("depolarizing2").generator), config);
  EXPECT_GE(estimate.estimate, 1.0 - 1e-6);
  EXPECT_GT(estimate.valid_samples, 0);
  EXPECT_THROW((void)mlsi_estimate(GradientSetup(build_model("zero").generator), config), NumericalError);
}

TEST(Entfun, TrajectoryCsv) {
  Rng rng = test::rng_for(65);
  const GradientSetup setup(build_model("hypercube2").generator);
  const auto rho = wishart_density(setup.algebra(), rng);
  const auto rows = entropy_trajectory(setup, rho, {0.0, 0.5, 1.0, 2.0});
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i].entropy, rows[i - 1].entropy + 1e-14);
  std::ostringstream out;
  write_trajectory_csv(out, rows);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,entropy,fisher");
  int count = 0;
  while (std::getline(in, line)) ++count;
  EXPECT_EQ(count, 4);
}

}  // namespace
}  // namespace ncgrad
