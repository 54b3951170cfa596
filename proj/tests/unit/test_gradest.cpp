#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "ncgrad/gradest.hpp"
#include "ncgrad/reference.hpp"

namespace ncgrad {
namespace {

using test::max_abs;

const OperatorMean kLog(MeanKind::logarithmic);
const OperatorMean kArith(MeanKind::arithmetic);

double min_eig(const Matrix& g) { return eig_hermitian(hermitian_part(g)).eigenvalues.minCoeff(); }

SamplerConfig small_config(GEMode mode, int num_rho = 6, int points = 8) {
  SamplerConfig c;
  c.num_rho = num_rho;
  c.t_grid = log_grid(1e-2, 5.0, points);
  c.seed = 11;
  c.mode = mode;
  return c;
}

TEST(Gradest, Grids) {
  const auto g = default_t_grid();
  ASSERT_EQ(g.size(), 40u);
  EXPECT_NEAR(g.front(), 1e-3, 1e-15);
  EXPECT_NEAR(g.back(), 10.0, 1e-12);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
  EXPECT_EQ(parse_ge_mode("sampled"), GEMode::sampled);
  EXPECT_EQ(to_string(GEMode::automatic), "auto");
  EXPECT_THROW((void)parse_ge_mode("fast"), std::invalid_argument);
}

TEST(Gradest, GeFormAtTraceStateIsSpectral) {
  // rho = 1: G = (e^{-2Kt} - e^{-2t}) L for the depolarizing semigroup.
  const GradientSetup setup(build_model("depolarizing2").generator);
  const auto one = DensityOperator::trace_state(setup.algebra());
  for (double t : {0.05, 0.7, 3.0}) {
    for (double k : {0.3, 1.0, 1.4}) {
      const Matrix g = ge_form(setup, kLog, t, one, k);
      const Matrix expected = (std::exp(-2 * k * t) - std::exp(-2 * t)) * setup.generator().superop();
      EXPECT_LT(max_abs(g - expected), 1e-12);
    }
  }
}

TEST(Gradest, OptimalKAtTraceStateIsSpectralGap) {
  for (const char* name : {"depolarizing3", "projection2", "hypercube2"}) {
    const GradientSetup setup(build_model(name).generator);
    const auto r = optimal_k(setup, kLog, 0.4, DensityOperator::trace_state(setup.algebra()));
    EXPECT_EQ(r.status, OptimalK::Status::finite) << name;
    EXPECT_NEAR(r.k, 1.0, 1e-9) << name;
  }
}

TEST(Gradest, OptimalKMatchesTwoPointFormula) {
  const ZooModel model = build_model("two_point", {{"k", "1"}, {"n", "3"}});
  const GradientSetup setup(model.generator, model.restriction);
  for (const auto& [mean, scalar] :
       {std::pair{kLog, &reference::logarithmic_mean}, std::pair{kArith, &reference::arithmetic_mean}}) {
    for (double a : {0.2, 1.0, 2.5}) {
      const double b = (1.0 - a / 3.0) * 1.5;
      Matrix rho = Matrix::Zero(3, 3);
      rho(0, 0) = a;
      rho(1, 1) = b;
      rho(2, 2) = b;
      for (double t : {0.01, 0.5, 4.0}) {
        const double decay = std::exp(-t);
        const double expected =
            1.0 + std::log(scalar(decay * a + 1 - decay, decay * b + 1 - decay) / scalar(a, b)) / (2 * t);
        const auto r = optimal_k(setup, mean, t, DensityOperator::from_matrix(setup.algebra(), rho));
        EXPECT_NEAR(r.k, expected, 1e-8) << mean.name() << " a=" << a << " t=" << t;
      }
    }
  }
}

TEST(Gradest, OptimalKIsSharpForGeForm) {
  Rng rng = test::rng_for(50);
  const GradientSetup setup(build_model("hypercube2").generator);
  for (int i = 0; i < 5; ++i) {
    const auto rho = wishart_density(setup.algebra(), rng);
    for (double t : {0.1, 1.0}) {
      const auto r = optimal_k(setup, kLog, t, rho);
      ASSERT_EQ(r.status, OptimalK::Status::finite);
      const double scale = 1.0 + max_abs(ge_form(setup, kLog, t, rho, r.k));
      EXPECT_GE(min_eig(ge_form(setup, kLog, t, rho, r.k - 1e-6)), -1e-10 * scale);
      EXPECT_LT(min_eig(ge_form(setup, kLog, t, rho, r.k + 1e-3)), -1e-12);
    }
  }
}

TEST(Gradest, GeMarginDecreasesInK) {
  Rng rng = test::rng_for(51);
  const GradientSetup setup(build_model("projections4").generator);
  const auto rho = wishart_density(setup.algebra(), rng);
  double previous = std::numeric_limits<double>::infinity();
  for (double k : {-1.0, 0.0, 0.5, 1.0, 1.5, 2.0}) {
    const double m = min_eig(ge_form(setup, kArith, 0.3, rho, k));
    EXPECT_LE(m, previous + 1e-12);
    previous = m;
  }
}

TEST(Gradest, OptimalKEdgeCases) {
  const GradientSetup zero(build_model("zero").generator);
  const auto r = optimal_k(zero, kLog, 1.0, DensityOperator::trace_state(zero.algebra()));
  EXPECT_EQ(r.status, OptimalK::Status::unbounded);
  EXPECT_TRUE(std::isinf(r.k) && r.k > 0);
  EXPECT_THROW((void)optimal_k(zero, kLog, 0.0, DensityOperator::trace_state(zero.algebra())),
               std::invalid_argument);
}

TEST(Gradest, DensitySamples) {
  const GradientSetup setup(build_model("depolarizing3").generator);
  const auto first = density_sample(setup, 5, 0);
  EXPECT_EQ(first.kind, "trace");
  EXPECT_LT(max_abs(first.rho.matrix() - setup.algebra().identity()), 1e-15);
  for (int i = 1; i < 20; ++i) {
    const auto s = density_sample(setup, 5, i);
    EXPECT_NEAR(setup.algebra().trace(s.rho.matrix()).real(), 1.0, 1e-12);
    EXPECT_EQ(max_abs(s.rho.matrix() - density_sample(setup, 5, i).rho.matrix()), 0.0);
  }
  const ZooModel two = build_model("two_point");
  const GradientSetup restricted(two.generator, two.restriction);
  for (int i = 0; i < 10; ++i) EXPECT_TRUE(two.restriction->contains(density_sample(restricted, 5, i).rho.matrix()));
}

TEST(Gradest, GeCheckPassesAndFailsAtTheRightConstants) {
  const GradientSetup setup(build_model("hypercube2").generator);
  const auto pass = ge_check(setup, kLog, 1.0, small_config(GEMode::exact));
  EXPECT_TRUE(pass.pass);
  EXPECT_EQ(pass.points.size(), 48u);
  EXPECT_EQ(pass.mode, "exact");
  const auto fail = ge_check(setup, kLog, 1.2, small_config(GEMode::exact));
  EXPECT_FALSE(fail.pass);
  EXPECT_GE(fail.witness.rho_id, 0);
  // The witness direction realizes the reported minimum.
  const auto rho = DensityOperator::from_matrix(setup.algebra(), fail.witness.rho, 1e-10);
  const Matrix g = ge_form(setup, kLog, fail.witness.t, rho, 1.2);
  const Vector a = setup.algebra().to_gns(fail.witness.direction);
  EXPECT_NEAR(a.dot(g * a).real() / a.squaredNorm(), fail.global_min, 1e-9);
}

TEST(Gradest, SampledModeAgreesWithExactAndDetectsViolations) {
  const GradientSetup setup(build_model("cyclic4").generator);
  const auto exact = ge_check(setup, kLog, 1.3, small_config(GEMode::exact));
  const auto sampled = ge_check(setup, kLog, 1.3, small_config(GEMode::sampled));
  EXPECT_EQ(sampled.mode, "sampled");
  EXPECT_FALSE(exact.pass);
  EXPECT_FALSE(sampled.pass);
  // Sampled values are Rayleigh quotients: never below the true minimum.
  for (std::size_t i = 0; i < exact.points.size(); ++i) {
    EXPECT_GE(sampled.points[i].min_eig, exact.points[i].min_eig - 1e-10);
  }
  EXPECT_LE(sampled.global_min, 0.5 * exact.global_min);
}

TEST(Gradest, DeterministicAcrossThreadCounts) {
  const GradientSetup setup(build_model("projections4").generator);
  auto c1 = small_config(GEMode::sampled);
  c1.threads = 1;
  auto c3 = c1;
  c3.threads = 3;
  const auto a = ge_check(setup, kLog, 1.0, c1);
  const auto b = ge_check(setup, kLog, 1.0, c3);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_EQ(a.points[i].min_eig, b.points[i].min_eig);
}

TEST(Gradest, ExactModeCap) {
  const GradientSetup setup(build_model("cyclic4").generator);
  EXPECT_THROW((void)cge_check(setup, kLog, 1.0, 2, small_config(GEMode::exact)), std::invalid_argument);
  const ZooModel two = build_model("two_point");
  EXPECT_THROW((void)cge_check(GradientSetup(two.generator, two.restriction), kLog, 0.5, 2,
                               small_config(GEMode::exact)),
               std::invalid_argument);
}

TEST(Gradest, TensorAndAmpliation) {
  Rng rng = test::rng_for(52);
  const auto a = build_model("projection2").generator;
  const auto b = build_model("depolarizing3").generator;
  const auto ab = tensor_generator(a, b);
  const Matrix x = random_gaussian(2, 2, rng);
  const Matrix y = random_gaussian(3, 3, rng);
  EXPECT_LT(max_abs(ab.apply(kron(x, y)) - kron(a.apply(x), y) - kron(x, b.apply(y))), 1e-12);
  const auto amp = ampliate(a, 3);
  EXPECT_LT(max_abs(amp.apply(kron(x, y)) - kron(a.apply(x), y)), 1e-12);
}

TEST(Gradest, IntertwiningCandidates) {
  const GradientSetup projection(build_model("projection2").generator);
  const auto zero_rate = intertwine_check(projection, direct_sum_candidate(projection, 0.0), 0.0, 8, 3);
  EXPECT_TRUE(zero_rate.pass) << zero_rate.witness;
  EXPECT_LE(zero_rate.max_intertwining_residual, 1e-9);
  EXPECT_FALSE(intertwine_check(projection, direct_sum_candidate(projection, 0.0), 1.0, 8, 3).pass);

  const GradientSetup depol(build_model("depolarizing2").generator);
  const auto good = intertwine_check(depol, scalar_candidate(depol, 1.0), 0.5, 10, 3);
  EXPECT_TRUE(good.pass) << good.witness;
  EXPECT_TRUE(good.j_commuting);
  // Condition (ii) reads e^{-2Kt} L(P_t rho) >= e^{-2t} L(rho), false at K = 1 once rho has an eigenvalue above 1.
  EXPECT_FALSE(intertwine_check(depol, scalar_candidate(depol, 1.0), 1.0, 10, 3).pass);
  // The wrong rate breaks condition (i).
  EXPECT_GT(intertwine_check(depol, scalar_candidate(depol, 2.0), 0.5, 10, 3).max_intertwining_residual, 1e-3);
}

TEST(Gradest, BakryEmeryMarginTrace) {
  // tau(e^{-2Kt} P_t Gamma(a) - Gamma(P_t a)) = (e^{-2Kt} - e^{-2t}) <a, L a> for the depolarizing semigroup.
  Rng rng = test::rng_for(53);
  const GradientSetup setup(build_model("depolarizing2").generator);
  const auto& alg = setup.algebra();
  const Matrix a = random_gaussian(2, 2, rng);
  const double energy = alg.trace(a.adjoint() * setup.generator().apply(a)).real();
  for (double t : {0.1, 1.0}) {
    const Matrix m = bakry_emery_margin(setup, t, 0.5, a);
    EXPECT_NEAR(alg.trace(m).real(), (std::exp(-t) - std::exp(-2 * t)) * energy, 1e-12);
  }
}

TEST(Gradest, OptimalKGlobalOnProjection) {
  OptimalKConfig config;
  config.seed = 4;
  config.restarts = 3;
  const auto r = optimal_k_global(GradientSetup(build_model("projection2").generator), kLog, config);
  EXPECT_GE(r.k_star, 0.999);
  EXPECT_LE(r.k_star, 1.0 + 1e-6);
  EXPECT_EQ(r.per_t.size(), config.t_grid.size());
}

}  // namespace
}  // namespace ncgrad
