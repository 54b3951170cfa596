#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "helpers.hpp"
#include "ncgrad/config.hpp"
#include "ncgrad/reference.hpp"

namespace ncgrad {
namespace {

using test::max_abs;

TEST(Serialize, MatrixRoundTrip) {
  Rng rng = test::rng_for(90);
  const Matrix m = random_gaussian(3, 2, rng);
  const Matrix back = matrix_from_json(Json::parse(to_json(m).dump()));
  EXPECT_EQ(max_abs(back - m), 0.0);
  EXPECT_THROW((void)matrix_from_json(Json::parse(R"({"rows": 2, "cols": 2, "data": [[1, 0]]})")),
               std::invalid_argument);
  // Real entries are accepted as plain numbers.
  const Matrix real = matrix_from_json(Json::parse(R"({"rows": 1, "cols": 2, "data": [1.5, [0, 2]]})"));
  EXPECT_EQ(real(0, 0), Complex(1.5, 0));
  EXPECT_EQ(real(0, 1), Complex(0, 2));
}

TEST(Serialize, NonFiniteNumbers) {
  EXPECT_EQ(number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_TRUE(std::isinf(number_from_json(number(-std::numeric_limits<double>::infinity()))));
  EXPECT_TRUE(std::isnan(number_from_json(number(std::nan("")))));
  EXPECT_EQ(number_from_json(number(0.25)), 0.25);
  EXPECT_THROW((void)number_from_json(Json("large")), std::invalid_argument);
}

TEST(Serialize, ModelRoundTripPreservesGenerator) {
  for (const auto& entry : catalog()) {
    const ZooModel model = build_model(entry.name);
    const ZooModel back = model_from_json(Json::parse(to_json(model).dump()));
    EXPECT_EQ(back.name, model.name);
    EXPECT_EQ(back.proven_k, model.proven_k);
    EXPECT_LT(max_abs(back.generator.superop() - model.generator.superop()), 1e-14) << entry.name;
    EXPECT_EQ(back.restriction.has_value(), model.restriction.has_value());
  }
  const ZooModel zero = build_model("zero");
  EXPECT_TRUE(std::isinf(model_from_json(to_json(zero)).proven_k));
}

TEST(Serialize, ModelParsingErrors) {
  EXPECT_THROW((void)model_from_json(Json::parse(R"({"jumps": []})")), std::invalid_argument);
  const auto non_hermitian = Json::parse(
      R"({"algebra": {"blocks": [2]}, "jumps": [{"weight": 1, "v": {"rows": 2, "cols": 2, "data": [0, 1, 0, 0]}}]})");
  EXPECT_THROW((void)model_from_json(non_hermitian), NumericalError);
}

TEST(Serialize, ReportsAreDeterministic) {
  const GradientSetup setup(build_model("depolarizing2").generator);
  SamplerConfig config;
  config.num_rho = 4;
  config.t_grid = {0.1, 1.0};
  config.seed = 3;
  auto strip = [](Json j) {
    j.erase("runtime_ms");
    return j.dump();
  };
  const OperatorMean mean(MeanKind::logarithmic);
  EXPECT_EQ(strip(to_json(ge_check(setup, mean, 0.5, config))), strip(to_json(ge_check(setup, mean, 0.5, config))));
}

TEST(Config, RoundTrip) {
  RunConfig c;
  c.model = "zoo:cyclic";
  c.params = {{"n", "6"}};
  c.mean = "arithmetic";
  c.k = 0.75;
  c.mode = "sampled";
  c.num_rho = 12;
  c.t_grid = {0.1, 0.2};
  c.seed = 99;
  c.ancilla = 3;
  c.output = "out.json";
  c.validate();
  const RunConfig back = run_config_from_json(Json::parse(to_json(c).dump()));
  EXPECT_EQ(to_json(back).dump(), to_json(c).dump());
  EXPECT_EQ(back.seed, std::optional<std::uint64_t>(99));
  EXPECT_EQ(back.k, std::optional<double>(0.75));
}

TEST(Config, Validation) {
  RunConfig c;
  c.mode = "sampled";
  EXPECT_THROW(c.validate(), std::invalid_argument);   // seed is mandatory for sampling
  c.seed = 1;
  EXPECT_NO_THROW(c.validate());
  c.mean = "median";
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_THROW((void)run_config_from_json(Json::parse(R"({"modle": "zoo:x"})")), std::invalid_argument);
  EXPECT_THROW((void)run_config_from_json(Json::parse(R"({"num_rho": "many"})")), std::invalid_argument);
}

TEST(Config, GitBlobHash) {
  // Values printed by `git hash-object`.
  EXPECT_EQ(git_blob_sha1(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(git_blob_sha1("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST(Config, ZooAndFileModelsHashTheSameDocument) {
  const LoadedModel zoo = load_model("zoo:cyclic4");
  const std::string path = testing::TempDir() + "ncgrad_model.json";
  {
    std::ofstream out(path, std::ios::binary);
    out << zoo.json_text;
  }
  const LoadedModel file = load_model(path);
  EXPECT_EQ(file.sha1, zoo.sha1);
  EXPECT_LT(max_abs(file.model.generator.superop() - zoo.model.generator.superop()), 1e-14);
  std::remove(path.c_str());
  EXPECT_THROW((void)load_model("/nonexistent/model.json"), std::invalid_argument);
}

TEST(Reference, GaussLegendreIsExactForPolynomials) {
  for (int n : {1, 4, 8, 64}) {
    const auto rule = reference::gauss_legendre(n);
    for (int p = 0; p < 2 * n; p += std::max(1, n / 4)) {
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], p);
      EXPECT_NEAR(sum, 1.0 / (p + 1), 1e-14) << n << " " << p;
    }
  }
}

}  // namespace
}  // namespace ncgrad
