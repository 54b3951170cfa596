#include "ncgrad/reproduce.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "ncgrad/random.hpp"
#include "ncgrad/reference.hpp"

namespace ncgrad {

namespace {

// Collects sub-check outcomes as text lines.
class Checks {
 public:
  template <typename... Parts>
  void expect(bool ok, const Parts&... parts) {
    std::ostringstream line;
    line << std::setprecision(8) << (ok ? "ok   " : "FAIL ");
    (line << ... << parts);
    lines_.push_back(line.str());
    pass_ = pass_ && ok;
  }
  [[nodiscard]] bool pass() const { return pass_; }
  [[nodiscard]] std::string text() const {
    std::string out;
    for (const auto& l : lines_) out += l + "\n";
    return out;
  }

 private:
  bool pass_ = true;
  std::vector<std::string> lines_;
};

SamplerConfig sampler(const ReproduceOptions& options, GEMode mode) {
  SamplerConfig config;
  config.seed = options.seed;
  config.threads = options.threads;
  config.mode = mode;
  return config;
}

std::string ge_summary(const GEReport& r) {
  std::ostringstream out;
  out << std::setprecision(6) << r.model << " mean=" << r.mean << " K=" << r.k << " mode=" << r.mode
      << " points=" << r.points.size() << " global_min=" << r.global_min;
  if (!r.pass) out << " witness(t=" << r.witness.t << ", rho_id=" << r.witness.rho_id << ")";
  return out.str();
}

const OperatorMean kLog(MeanKind::logarithmic);
const OperatorMean kArith(MeanKind::arithmetic);

void criterion1(Checks& c, const ReproduceOptions& o) {
  for (const char* name : {"depolarizing2", "depolarizing3"}) {
    const ZooModel model = build_model(name);
    c.expect(true, name, ": ", model.reference);
    const GradientSetup setup(model.generator);
    const GEReport ge = ge_check(setup, kLog, 0.5, sampler(o, GEMode::exact), model.name);
    c.expect(ge.pass && ge.points.size() == 2000, "GE ", ge_summary(ge));
    const GEReport cge = cge_check(setup, kLog, 0.5, 2, sampler(o, GEMode::exact), model.name);
    c.expect(cge.pass, "CGE ", ge_summary(cge));
  }
}

void criterion2(Checks& c, const ReproduceOptions& o) {
  const ZooModel model = build_model("projection2");
  c.expect(true, model.name, ": ", model.reference);
  OptimalKConfig config;
  config.seed = o.seed;
  config.threads = o.threads;
  const OptimalKGlobal result = optimal_k_global(GradientSetup(model.generator), kLog, config);
  c.expect(result.k_star >= 0.999 && result.k_star <= 1.0 + 1e-6, "K* = ", result.k_star, " at t = ", result.t_star,
           " (target [0.999, 1 + 1e-6])");
}

void criterion3(Checks& c, const ReproduceOptions& o) {
  for (const char* name : {"projections4", "hypercube2"}) {
    const ZooModel model = build_model(name);
    c.expect(true, name, ": ", model.reference);
    const GradientSetup setup(model.generator);
    for (const auto& mean : {kLog, kArith}) {
      const GEReport at_one = ge_check(setup, mean, 1.0, sampler(o, GEMode::exact), model.name);
      c.expect(at_one.pass, "GE ", ge_summary(at_one));
      const GEReport above = ge_check(setup, mean, 1.1, sampler(o, GEMode::exact), model.name);
      const bool detected = !above.pass && above.witness.rho_id >= 0 && above.witness.direction.size() > 0;
      c.expect(detected, "violation detected: ", ge_summary(above));
    }
  }
}

double group_relation_residual(const ZooModel& model, const std::vector<double>& psi) {
  double worst = 0.0;
  const auto& lambda = model.group->lambda;
  for (std::size_t g = 0; g < lambda.size(); ++g) {
    const Matrix r = model.generator.apply(lambda[g]) - psi[g] * lambda[g];
    worst = std::max(worst, frobenius_norm(r));
  }
  return worst;
}

void criterion4(Checks& c, const ReproduceOptions& o) {
  for (int n : {4, 6}) {
    const ZooModel model = build_model("cyclic" + std::to_string(n));
    c.expect(true, model.name, ": ", model.reference);
    std::vector<double> psi;
    for (int k = 0; k < n; ++k) psi.push_back(std::min(k, n - k));
    const double residual = group_relation_residual(model, psi);
    c.expect(residual <= 1e-10, "max ||L lambda_k - min(k, n-k) lambda_k|| = ", residual);
    const GradientSetup setup(model.generator);
    const GEMode mode = n == 6 ? GEMode::sampled : GEMode::automatic;
    const GEReport ge = ge_check(setup, kLog, 1.0, sampler(o, mode), model.name);
    c.expect(ge.pass && (n != 6 || (ge.mode == "sampled" && ge.points.size() >= 200)), "GE ", ge_summary(ge));
    if (n == 4) {
      const GEReport cge = cge_check(setup, kLog, 1.0, 2, sampler(o, GEMode::automatic), model.name);
      c.expect(cge.pass, "CGE ", ge_summary(cge));
    }
  }
}

void criterion5(Checks& c, const ReproduceOptions& o) {
  const ZooModel model = build_model("symmetric3");
  c.expect(true, model.name, ": ", model.reference);
  std::vector<double> psi;
  for (const auto& p : permutations(3)) {
    int moved = 0;
    for (int i = 0; i < 3; ++i) moved += p[static_cast<std::size_t>(i)] != i;
    psi.push_back(moved);
  }
  const double residual = group_relation_residual(model, psi);
  c.expect(residual <= 1e-10 && psi.size() == 6, "max ||L lambda_s - hamming(s) lambda_s|| over 6 elements = ",
           residual);
  const GEReport ge = ge_check(GradientSetup(model.generator), kLog, 0.5, sampler(o, GEMode::sampled), model.name);
  c.expect(ge.pass && ge.points.size() >= 200 && ge.global_min >= -1e-8, "GE ", ge_summary(ge));
}

void criterion6(Checks& c, const ReproduceOptions& o) {
  const ZooModel model = build_model("two_point");
  c.expect(true, model.name, ": ", model.reference);
  const GradientSetup setup(model.generator, model.restriction);
  OptimalKConfig config;
  config.seed = o.seed;
  config.threads = o.threads;
  const double p = 1.0 / 3.0;
  const OptimalKGlobal log_k = optimal_k_global(setup, kLog, config);
  const OptimalKGlobal arith_k = optimal_k_global(setup, kArith, config);
  const double log_oracle = reference::two_point_optimal_k(p, reference::logarithmic_mean, config.t_grid);
  const double arith_oracle = reference::two_point_optimal_k(p, reference::arithmetic_mean, config.t_grid);
  c.expect(std::abs(log_k.k_star - arith_k.k_star) > 1e-3, "K*(logarithmic) = ", log_k.k_star,
           ", K*(arithmetic) = ", arith_k.k_star);
  c.expect(std::abs(log_k.k_star - log_oracle) <= 1e-3, "logarithmic vs grid oracle ", log_oracle);
  c.expect(std::abs(arith_k.k_star - arith_oracle) <= 1e-3, "arithmetic vs grid oracle ", arith_oracle);
}

void criterion7(Checks& c, const ReproduceOptions& o) {
  const ZooModel depol = build_model("depolarizing2");
  const ZooModel projection = build_model("projection2");
  const GEReport dd = tensor_ge_harness(depol.generator, depol.generator, kLog, 0.5, sampler(o, GEMode::automatic),
                                        "depolarizing2 x depolarizing2");
  c.expect(dd.pass, "GE ", ge_summary(dd));
  const GEReport pd = tensor_ge_harness(projection.generator, depol.generator, kLog, 0.5,
                                        sampler(o, GEMode::automatic), "projection2 x depolarizing2");
  c.expect(pd.pass, "GE ", ge_summary(pd));
}

void criterion8(Checks& c, const ReproduceOptions& o) {
  const ZooModel model = build_model("depolarizing2");
  c.expect(true, model.name, ": ", model.reference);
  const GradientSetup setup(model.generator);
  const IntertwineReport r = intertwine_check(setup, scalar_candidate(setup, 1.0), 0.5, 20, o.seed);
  c.expect(r.pass && r.points.size() == 20, "conditions (i)-(iii) on ", r.points.size(),
           " points: left margin ", r.min_left_margin, ", right margin ", r.min_right_margin,
           ", J residual ", r.max_j_residual);
  c.expect(r.max_intertwining_residual <= 1e-9, "intertwining residual ", r.max_intertwining_residual);
}

void criterion9(Checks& c, const ReproduceOptions& o) {
  const ZooModel model = build_model("depolarizing2");
  c.expect(true, model.name, ": ", model.reference);
  const TracialAlgebra& algebra = model.generator.algebra();
  std::vector<DensityOperator> densities;
  for (int i = 0; i < 30; ++i) {
    Rng rng = stream_rng(o.seed, 0x9000 + static_cast<std::uint64_t>(i));
    densities.push_back(wishart_density(algebra, rng));
  }
  std::vector<double> t_grid;
  for (int i = 0; i <= 25; ++i) t_grid.push_back(0.2 * i);
  const FisherDecayReport decay = fisher_decay_check(model.generator, 0.5, densities, t_grid);
  c.expect(decay.pass && decay.min_margin >= -1e-8, "Fisher decay over ", decay.points.size(),
           " points, min margin ", decay.min_margin, ", fitted rate ", decay.fitted_exponent);

  MlsiConfig mlsi;
  mlsi.seed = o.seed;
  mlsi.threads = o.threads;
  const MlsiEstimate estimate = mlsi_estimate(GradientSetup(model.generator), mlsi);
  c.expect(estimate.estimate >= 1.0 - 1e-6, "MLSI estimate ", estimate.estimate, " (", estimate.valid_samples,
           " valid samples)");

  Matrix spot = Matrix::Zero(2, 2);
  spot(0, 0) = 1.5;
  spot(1, 1) = 0.5;
  const double fisher = fisher_information(model.generator, DensityOperator::from_matrix(algebra, spot)).value;
  const double expected = 0.25 * std::log(3.0);
  c.expect(std::abs(fisher - expected) <= 1e-10, "I(diag(3/2, 1/2)) = ", std::setprecision(15), fisher,
           " vs ln(3)/4 = ", expected);
}

void criterion10(Checks& c, const ReproduceOptions& o) {
  const TracialAlgebra algebra = TracialAlgebra::full(3);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    Rng rng = stream_rng(o.seed, 0xa000 + static_cast<std::uint64_t>(i));
    const DensityOperator rho = wishart_density(algebra, rng);
    const Matrix xi = random_gaussian(3, 3, rng);
    const Matrix kernel = RhoHat(kLog, algebra, rho.matrix()).apply(xi);
    const Matrix quadrature = reference::log_mean_quadrature(rho.matrix(), xi, 64);
    worst = std::max(worst, frobenius_norm(kernel - quadrature) / std::max(1.0, frobenius_norm(quadrature)));
  }
  c.expect(worst <= 1e-8, "logarithmic kernel vs 64-point quadrature on 50 pairs: max relative error ", worst);
  for (const auto& mean : OperatorMean::builtins()) {
    const MeanAuditReport audit = mean_axiom_audit(mean, 200, o.seed);
    const bool ok = audit.passed && audit.monotonicity_margin >= -1e-9 && audit.transformer_margin >= -1e-9;
    c.expect(ok, "audit ", audit.mean, ": monotonicity ", audit.monotonicity_margin, ", transformer ",
             audit.transformer_margin, ", normalization ", audit.normalization_error);
  }
}

void criterion11(Checks& c, const ReproduceOptions& o) {
  {
    const ZooModel model = build_model("depolarizing2");
    const GradientSetup setup(model.generator);
    Rng rng = stream_rng(o.seed, 0xb000);
    const DensityOperator rho = wishart_density(setup.algebra(), rng);
    const double self = w_upper_bound(setup, kLog, rho, rho, 8, 20, o.seed).bound;
    c.expect(self <= 1e-8, "W bound(rho, rho) = ", self);

    const DensityOperator other = wishart_density(setup.algebra(), rng);
    double previous = w_upper_bound(setup, kLog, rho, other, 2, 20, o.seed).bound;
    double worst = -std::numeric_limits<double>::infinity();
    for (int n : {4, 8, 16}) {
      const double current = w_upper_bound(setup, kLog, rho, other, n, 20, o.seed).bound;
      worst = std::max(worst, current - previous);
      previous = current;
    }
    c.expect(worst <= 1e-6, "depolarizing2 refinement N -> 2N (2..16): max increase ", worst, ", final bound ",
             previous);
  }
  {
    const ZooModel model = build_model("two_point", {{"k", "1"}, {"n", "2"}});
    const GradientSetup setup(model.generator, model.restriction);
    const double s0 = -0.6;
    const double s1 = 0.7;
    auto density = [&](double s) {
      Matrix m = Matrix::Zero(2, 2);
      m(0, 0) = 1.0 + s;
      m(1, 1) = 1.0 - s;
      return DensityOperator::from_matrix(setup.algebra(), m);
    };
    for (const auto& [mean, scalar] :
         {std::pair{kLog, &reference::logarithmic_mean}, std::pair{kArith, &reference::arithmetic_mean}}) {
      const double oracle = reference::two_point_distance(s0, s1, scalar);
      double previous = w_upper_bound(setup, mean, density(s0), density(s1), 2, 40, o.seed).bound;
      double worst = -std::numeric_limits<double>::infinity();
      for (int n : {4, 8, 16}) {
        const double current = w_upper_bound(setup, mean, density(s0), density(s1), n, 40, o.seed).bound;
        worst = std::max(worst, current - previous);
        previous = current;
      }
      c.expect(std::abs(previous - oracle) <= 0.02 * oracle, "two-point ", mean.name(), " bound ", previous,
               " vs grid oracle ", oracle);
      c.expect(worst <= 1e-6, "two-point ", mean.name(), " refinement: max increase ", worst);
    }
  }
  {
    const ZooModel model = build_model("projection2");
    const GradientSetup setup(model.generator);
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 1.5;
    a(1, 1) = 0.5;
    Matrix b = Matrix::Zero(2, 2);
    b(0, 0) = 0.5;
    b(1, 1) = 1.5;
    std::string message;
    try {
      (void)w_upper_bound(setup, kLog, DensityOperator::from_matrix(setup.algebra(), a),
                          DensityOperator::from_matrix(setup.algebra(), b), 4, 5, o.seed);
    } catch (const NotConnectableError& e) {
      message = e.what();
    }
    c.expect(message.find("not connectable") != std::string::npos, "projection2 distinct fixed-point parts: '",
             message, "'");
  }
}

void criterion12(Checks& c, const ReproduceOptions&) {
  const std::vector<double> t_samples = {0.1, 1.0, 5.0};
  for (const auto& entry : catalog()) {
    const ZooModel model = build_model(entry.name);
    const QmsReport qms = verify_qms(model.generator, t_samples);
    const TangentModule module(model.generator);
    const Matrix d = module.stacked();
    const double dd = (d.adjoint() * d - model.generator.superop()).cwiseAbs().maxCoeff();
    const double lowest = Semigroup(model.generator).spectrum().eigenvalues.minCoeff();
    bool ok = qms.passed && dd <= 1e-10 && lowest >= -1e-9;
    std::ostringstream gap_text;
    if (entry.family == "depolarizing" || entry.family == "projection") {
      const double gap = fixed_point_algebra(model.generator).spectral_gap;
      ok = ok && std::abs(gap - 1.0) <= 1e-9;
      gap_text << std::setprecision(12) << ", spectral gap " << gap;
    }
    c.expect(ok, entry.name, ": verify_qms ", qms.passed ? "passed" : "failed", ", ||D^dagger D - L|| = ", dd,
             ", min spectrum ", lowest, gap_text.str(), " [", entry.reference, "]");
  }
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "depolarizing M2/M3: GE and CGE at K = 1/2", 30.0},
      {2, "single projection: optimal constant is 1", 60.0},
      {3, "commuting projections and hypercube: GE(1), violation at 1.1", 120.0},
      {4, "cyclic groups: eigen-relations, GE(1), CGE(1) for Z4", 300.0},
      {5, "symmetric group S3: eigen-relations and GE(1/2)", 600.0},
      {6, "two-point chain: optimal constant depends on the mean", 0.0},
      {7, "tensor stability of GE(1/2)", 120.0},
      {8, "intertwining criterion for the depolarizing semigroup", 0.0},
      {9, "Fisher information decay, MLSI and an analytic value", 0.0},
      {10, "operator-mean kernel vs quadrature, mean axioms", 0.0},
      {11, "transport upper bounds", 0.0},
      {12, "structural invariants of every zoo model", 0.0},
  };
  return list;
}

CriterionResult run_criterion(int id, const ReproduceOptions& options) {
  CriterionResult result;
  const Criterion* spec = nullptr;
  for (const auto& c : criteria()) {
    if (c.id == id) spec = &c;
  }
  if (spec == nullptr) throw std::invalid_argument("unknown criterion " + std::to_string(id));
  result.id = id;
  result.title = spec->title;
  result.budget_seconds = spec->budget_seconds;

  using Body = void (*)(Checks&, const ReproduceOptions&);
  static const Body bodies[] = {criterion1, criterion2, criterion3,  criterion4,  criterion5,  criterion6,
                                criterion7, criterion8, criterion9, criterion10, criterion11, criterion12};
  Checks checks;
  const auto start = std::chrono::steady_clock::now();
  try {
    bodies[id - 1](checks, options);
  } catch (const std::exception& e) {
    checks.expect(false, "exception: ", e.what());
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (result.budget_seconds > 0.0) {
    checks.expect(result.seconds < result.budget_seconds, "runtime ", result.seconds, " s (limit ",
                  result.budget_seconds, " s)");
  }
  result.pass = checks.pass();
  result.detail = checks.text();
  return result;
}

Json to_json(const CriterionResult& r) {
  return {{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds},
          {"budget_seconds", r.budget_seconds}};
}

std::string summary_line(const CriterionResult& r) {
  std::ostringstream out;
  out << (r.pass ? "[PASS] " : "[FAIL] ") << std::setw(2) << r.id << "  " << r.title << "  (" << std::fixed
      << std::setprecision(1) << r.seconds << " s";
  if (r.budget_seconds > 0.0) out << " / " << r.budget_seconds << " s";
  out << ")";
  return out.str();
}

}  // namespace ncgrad
