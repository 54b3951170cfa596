// Command-line front end. Exit codes: 0 pass, 1 fail, 2 error.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ncgrad/config.hpp"
#include "ncgrad/random.hpp"
#include "ncgrad/reproduce.hpp"

namespace {

using namespace ncgrad;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kError = 2;

// Flag storage shared by all subcommands; only the parsed one is read.
struct Flags {
  std::string config;
  std::string model;
  std::vector<std::string> params;
  std::string second_model;
  std::string mean;
  double k = 0.0;
  std::string mode;
  int num_rho = 0;
  std::uint64_t seed = 0;
  int threads = 0;
  int ancilla = 0;
  std::string candidate;
  double rate = 0.0;
  int samples = 0;
  int restarts = 0;
  int segments = 0;
  int iters = 0;
  std::string output;
  std::string trajectory;
  std::string rho0;
  std::string rho1;
  std::vector<int> criteria;
};

ZooParams parse_params(const std::vector<std::string>& items) {
  ZooParams params;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--param expects key=value, got '" + item + "'");
    params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return params;
}

// Config file first, then any flag given on the command line.
RunConfig resolve(const CLI::App& sub, const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  auto given = [&sub](const char* name) {
    try {
      return sub.count(name) > 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  if (given("--model")) c.model = f.model;
  if (given("--param")) {
    for (const auto& [key, value] : parse_params(f.params)) c.params[key] = value;
  }
  if (given("--second-model")) c.second_model = f.second_model;
  if (given("--mean")) c.mean = f.mean;
  if (given("--K")) c.k = f.k;
  if (given("--mode")) c.mode = f.mode;
  if (given("--num-rho")) c.num_rho = f.num_rho;
  if (given("--seed")) c.seed = f.seed;
  if (given("--threads")) c.threads = f.threads;
  if (given("--ancilla")) c.ancilla = f.ancilla;
  if (given("--candidate")) c.candidate = f.candidate;
  if (given("--rate")) c.rate = f.rate;
  if (given("--samples")) c.samples = f.samples;
  if (given("--restarts")) c.restarts = f.restarts;
  if (given("--segments")) c.segments = f.segments;
  if (given("--iters")) c.iters = f.iters;
  if (given("--output")) c.output = f.output;
  if (given("--trajectory")) c.trajectory = f.trajectory;
  c.validate();
  return c;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  sub->add_option("--model", f.model, "zoo:<name> or a model JSON file");
  sub->add_option("--param", f.params, "zoo parameter key=value (repeatable)");
  sub->add_option("--mean", f.mean, "arithmetic|logarithmic|geometric|harmonic|left|right");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--threads", f.threads, "worker threads (default: NCGRAD_THREADS, then all cores)");
  sub->add_option("--output,-o", f.output, "report path (default: stdout)");
}

void add_ge(CLI::App* sub, Flags& f) {
  sub->add_option("--K", f.k, "curvature constant (default: the model's proven constant)");
  sub->add_option("--mode", f.mode, "auto|exact|sampled");
  sub->add_option("--num-rho", f.num_rho, "densities per t");
}

SamplerConfig sampler_config(const RunConfig& c) {
  SamplerConfig s;
  s.num_rho = c.num_rho;
  if (!c.t_grid.empty()) s.t_grid = c.t_grid;
  s.seed = c.seed_or_default();
  s.threads = c.threads;
  s.mode = parse_ge_mode(c.mode);
  return s;
}

double constant_or_proven(const RunConfig& c, const ZooModel& model) {
  if (c.k) return *c.k;
  if (std::isnan(model.proven_k)) throw std::invalid_argument("--K is required for models without a proven constant");
  return model.proven_k;
}

void emit(const RunConfig& c, const Json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + c.output + "'");
  out << text;
}

Json envelope(const std::string& command, const RunConfig& c, const LoadedModel& loaded, Json report) {
  Json doc;
  doc["command"] = command;
  doc["model"] = loaded.model.name;
  doc["model_sha1"] = loaded.sha1;
  doc["model_reference"] = loaded.model.reference;
  doc["config"] = to_json(c);
  doc["report"] = std::move(report);
  return doc;
}

int verdict(bool pass, const RunConfig& c) {
  if (!pass && !c.output.empty()) std::cerr << "FAIL: witness in " << c.output << "\n";
  return pass ? kPass : kFail;
}

void require_seed_for_sampling(const RunConfig& c, const GEReport& report) {
  if (report.mode == "sampled" && !c.seed) throw std::invalid_argument("sampled mode requires --seed");
}

int cmd_zoo_list() {
  std::cout << std::left << std::setw(16) << "name" << std::setw(14) << "family" << std::setw(12) << "params"
            << std::setw(8) << "K" << "reference\n";
  for (const auto& e : catalog()) {
    std::string params;
    for (const auto& [key, value] : e.params) params += (params.empty() ? "" : ",") + key + "=" + value;
    std::ostringstream k;
    k << e.proven_k;
    std::cout << std::left << std::setw(16) << e.name << std::setw(14) << e.family << std::setw(12)
              << (params.empty() ? "-" : params) << std::setw(8) << k.str() << e.reference << "\n";
  }
  return kPass;
}

int cmd_zoo_build(const std::string& name, const std::vector<std::string>& params,
                  const std::vector<std::string>& extras, const std::string& output) {
  ZooParams p = parse_params(params);
  // Also accept "--key value" pairs, e.g. `zoo build cyclic --n 4`.
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& flag = extras[i];
    if (!flag.starts_with("--") || flag.size() < 3) throw std::invalid_argument("unexpected argument '" + flag + "'");
    const auto eq = flag.find('=');
    if (eq != std::string::npos) {
      p[flag.substr(2, eq - 2)] = flag.substr(eq + 1);
    } else {
      if (i + 1 >= extras.size()) throw std::invalid_argument("missing value for '" + flag + "'");
      p[flag.substr(2)] = extras[++i];
    }
  }
  const std::string text = model_json_text(build_model(name, p));
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + output + "'");
    out << text;
  }
  return kPass;
}

int cmd_verify(const RunConfig& c) {
  const LoadedModel loaded = load_model(c.model, c.params);
  const auto& gen = loaded.model.generator;
  const QmsReport qms = verify_qms(gen, std::vector<double>{0.1, 1.0, 5.0});
  const Matrix d = TangentModule(gen).stacked();
  const double dd = (d.adjoint() * d - gen.superop()).cwiseAbs().maxCoeff();
  const double lowest = Semigroup(gen).spectrum().eigenvalues.minCoeff();
  const FixedPointAlgebra fix = fixed_point_algebra(gen);
  bool restriction_ok = true;
  if (loaded.model.restriction) {
    try {
      (void)GradientSetup(gen, loaded.model.restriction);
    } catch (const NumericalError&) {
      restriction_ok = false;
    }
  }
  const bool pass = qms.passed && dd <= 1e-10 && lowest >= -1e-9 && restriction_ok;
  Json report = to_json(qms);
  report["dirichlet_residual"] = number(dd);
  report["min_spectrum"] = number(lowest);
  report["spectral_gap"] = number(fix.spectral_gap);
  report["fixed_point_dim"] = fix.algebra.dim();
  report["restriction_invariant"] = restriction_ok;
  if (loaded.model.group) {
    report["eigen_residual"] = number(loaded.model.group->eigen_residual);
    report["warnings"] = loaded.model.group->warnings;
  }
  report["pass"] = pass;
  emit(c, envelope("verify", c, loaded, std::move(report)));
  return verdict(pass, c);
}

int cmd_ge_check(const RunConfig& c) {
  const LoadedModel loaded = load_model(c.model, c.params);
  const GradientSetup setup(loaded.model.generator, loaded.model.restriction);
  const double k = constant_or_proven(c, loaded.model);
  SamplerConfig s = sampler_config(c);
  if (s.mode == GEMode::automatic && setup.form_dim() * setup.form_dim() > kExactCap && !c.seed) {
    throw std::invalid_argument("sampled mode requires --seed");
  }
  const GEReport report = ge_check(setup, OperatorMean::by_name(c.mean), k, s, loaded.model.name);
  require_seed_for_sampling(c, report);
  emit(c, envelope("ge-check", c, loaded, to_json(report)));
  return verdict(report.pass, c);
}

int cmd_cge_check(const RunConfig& c) {
  const LoadedModel loaded = load_model(c.model, c.params);
  const GradientSetup setup(loaded.model.generator);
  const double k = constant_or_proven(c, loaded.model);
  const int amplified = setup.form_dim() * c.ancilla * c.ancilla;
  if (parse_ge_mode(c.mode) == GEMode::automatic && amplified * amplified > kExactCap && !c.seed) {
    throw std::invalid_argument("sampled mode requires --seed");
  }
  const GEReport report =
      cge_check(setup, OperatorMean::by_name(c.mean), k, c.ancilla, sampler_config(c), loaded.model.name);
  require_seed_for_sampling(c, report);
  emit(c, envelope("cge-check", c, loaded, to_json(report)));
  return verdict(report.pass, c);
}

int cmd_optimal_k(const RunConfig& c) {
  const LoadedModel loaded = load_model(c.model, c.params);
  const GradientSetup setup(loaded.model.generator, loaded.model.restriction);
  OptimalKConfig config;
  if (!c.t_grid.empty()) config.t_grid = c.t_grid;
  config.restarts = c.restarts;
  config.seed = c.seed_or_default();
  config.threads = c.threads;
  const OptimalKGlobal result = optimal_k_global(setup, OperatorMean::by_name(c.mean), config);
  // A constant below the proven one would contradict the model's metadata.
  const bool pass = std::isnan(loaded.model.proven_k) || result.k_star >= loaded.model.proven_k - 1e-6;
  Json report = to_json(result);
  report["proven_k"] = number(loaded.model.proven_k);
  report["pass"] = pass;
  emit(c, envelope("optimal-k", c, loaded, std::move(report)));
  return verdict(pass, c);
}

int cmd_intertwine(const RunConfig& c) {
  const LoadedModel loaded = load_model(c.model, c.params);
  const GradientSetup setup(loaded.model.generator);
  const double k = constant_or_proven(c, loaded.model);
  const CandidateFamily candidate =
      c.candidate == "scalar" ? scalar_candidate(setup, c.rate) : direct_sum_candidate(setup, c.rate);
  const IntertwineReport report = intertwine_check(setup, candidate, k, c.samples, c.seed_or_default());
  Json doc = to_json(report);
  doc["candidate"] = c.candidate;
  doc["rate"] = c.rate;
  emit(c, envelope("intertwine-check", c, loaded, std::move(doc)));
  return verdict(report.pass, c);
}

int cmd_tensor(const RunConfig& c) {
  if (c.second_model.empty()) throw std::invalid_argument("tensor-check requires --second-model");
  const LoadedModel first = load_model(c.model, c.params);
  const LoadedModel second = load_model(c.second_model);
  const double k = c.k ? *c.k : std::min(first.model.proven_k, second.model.proven_k);
  if (std::isnan(k)) throw std::invalid_argument("--K is required for models without a proven constant");
  const std::string name = first.model.name + " x " + second.model.name;
  const GEReport report = tensor_ge_harness(first.model.generator, second.model.generator,
                                            OperatorMean::by_name(c.mean), k, sampler_config(c), name);
  require_seed_for_sampling(c, report);
  Json doc = envelope("tensor-check", c, first, to_json(report));
  doc["second_model_sha1"] = second.sha1;
  emit(c, doc);
  return verdict(report.pass, c);
}

int cmd_mlsi(const RunConfig& c) {
  const LoadedModel loaded = load_model(c.model, c.params);
  const GradientSetup setup(loaded.model.generator, loaded.model.restriction);
  MlsiConfig config;
  config.samples = c.samples;
  config.seed = c.seed_or_default();
  config.threads = c.threads;
  const MlsiEstimate estimate = mlsi_estimate(setup, config);
  // GE(K) implies I >= 2K Ent_fix.
  const double k = c.k ? *c.k : loaded.model.proven_k;
  const bool pass = std::isnan(k) || std::isinf(k) || estimate.estimate >= 2.0 * k - 1e-6;
  Json report = to_json(estimate);
  report["K"] = number(k);
  report["pass"] = pass;
  emit(c, envelope("mlsi", c, loaded, std::move(report)));
  return verdict(pass, c);
}

int cmd_fisher_decay(const RunConfig& c) {
  const LoadedModel loaded = load_model(c.model, c.params);
  const GradientSetup setup(loaded.model.generator, loaded.model.restriction);
  const double k = constant_or_proven(c, loaded.model);
  std::vector<DensityOperator> densities;
  for (int i = 0; i < c.num_rho; ++i) {
    // Wishart samples of the sweep (full support).
    densities.push_back(density_sample(setup, c.seed_or_default(), 10 * i + 1).rho);
  }
  std::vector<double> t_grid = c.t_grid;
  if (t_grid.empty()) {
    for (int i = 0; i <= 25; ++i) t_grid.push_back(0.2 * i);
  }
  const FisherDecayReport report = fisher_decay_check(loaded.model.generator, k, densities, t_grid);
  if (!c.trajectory.empty()) {
    std::ofstream csv(c.trajectory);
    if (!csv) throw std::runtime_error("cannot write '" + c.trajectory + "'");
    write_trajectory_csv(csv, entropy_trajectory(setup, densities.front(), t_grid));
  }
  emit(c, envelope("fisher-decay", c, loaded, to_json(report)));
  return verdict(report.pass, c);
}

DensityOperator read_density(const std::string& path, const TracialAlgebra& algebra) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("density '" + path + "': " + e.what());
  }
  return DensityOperator::normalized(algebra, matrix_from_json(j));
}

int cmd_transport(const RunConfig& c, const Flags& f) {
  const LoadedModel loaded = load_model(c.model, c.params);
  const GradientSetup setup(loaded.model.generator, loaded.model.restriction);
  const std::uint64_t seed = c.seed_or_default();
  const DensityOperator rho0 =
      f.rho0.empty() ? density_sample(setup, seed, 1).rho : read_density(f.rho0, setup.algebra());
  const DensityOperator rho1 =
      f.rho1.empty() ? density_sample(setup, seed, 2).rho : read_density(f.rho1, setup.algebra());
  const TransportResult result =
      w_upper_bound(setup, OperatorMean::by_name(c.mean), rho0, rho1, c.segments, c.iters, seed);
  Json report = to_json(result);
  report["rho0"] = to_json(rho0.matrix());
  report["rho1"] = to_json(rho1.matrix());
  emit(c, envelope("transport", c, loaded, std::move(report)));
  return kPass;
}

int cmd_reproduce(const RunConfig& c, const std::vector<int>& selected) {
  ReproduceOptions options;
  options.seed = c.seed.value_or(7);
  options.threads = c.threads;
  Json results = Json::array();
  bool all = true;
  for (const auto& criterion : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), criterion.id) == selected.end()) continue;
    const CriterionResult r = run_criterion(criterion.id, options);
    std::cout << summary_line(r) << "\n" << std::flush;
    if (!r.pass) std::cout << r.detail;
    all = all && r.pass;
    results.push_back(to_json(r));
  }
  if (!c.output.empty()) {
    Json doc = {{"command", "reproduce"}, {"seed", options.seed}, {"pass", all}, {"criteria", std::move(results)}};
    emit(c, doc);
  }
  return all ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient estimates, curvature constants and transport bounds for quantum Markov semigroups"};
  app.require_subcommand(1);
  Flags f;

  auto* zoo = app.add_subcommand("zoo", "model catalog");
  zoo->require_subcommand(1);
  auto* zoo_list = zoo->add_subcommand("list", "print the catalog");
  auto* zoo_build = zoo->add_subcommand("build", "emit generator JSON for a model");
  std::string zoo_name;
  zoo_build->add_option("name", zoo_name, "catalog name or family")->required();
  zoo_build->add_option("--param", f.params, "parameter key=value (repeatable)");
  zoo_build->add_option("--output,-o", f.output, "output path (default: stdout)");
  zoo_build->allow_extras();

  auto* verify = app.add_subcommand("verify", "structural checks of a generator");
  add_common(verify, f);
  auto* ge = app.add_subcommand("ge-check", "gradient estimate GE(K)");
  add_common(ge, f);
  add_ge(ge, f);
  auto* cge = app.add_subcommand("cge-check", "complete gradient estimate with an ancilla");
  add_common(cge, f);
  add_ge(cge, f);
  cge->add_option("--ancilla", f.ancilla, "ancilla dimension");
  auto* optk = app.add_subcommand("optimal-k", "largest K over sampled densities and t");
  add_common(optk, f);
  optk->add_option("--restarts", f.restarts, "descent restarts");
  auto* inter = app.add_subcommand("intertwine-check", "intertwining criterion");
  add_common(inter, f);
  inter->add_option("--K", f.k, "curvature constant");
  inter->add_option("--candidate", f.candidate, "scalar|direct_sum");
  inter->add_option("--rate", f.rate, "candidate decay rate");
  inter->add_option("--samples", f.samples, "number of (t, rho) samples");
  auto* tensor = app.add_subcommand("tensor-check", "GE of a tensor product generator");
  add_common(tensor, f);
  add_ge(tensor, f);
  tensor->add_option("--second-model", f.second_model, "second factor");
  auto* mlsi = app.add_subcommand("mlsi", "sampled modified log-Sobolev constant");
  add_common(mlsi, f);
  mlsi->add_option("--K", f.k, "compare against 2K");
  mlsi->add_option("--samples", f.samples, "random samples");
  auto* fisher = app.add_subcommand("fisher-decay", "I(P_t rho) <= exp(-2Kt) I(rho)");
  add_common(fisher, f);
  fisher->add_option("--K", f.k, "curvature constant");
  fisher->add_option("--num-rho", f.num_rho, "densities");
  fisher->add_option("--trajectory", f.trajectory, "CSV path for (t, entropy, fisher)");
  auto* transport = app.add_subcommand("transport", "discretized upper bound on the transport distance");
  add_common(transport, f);
  transport->add_option("--segments", f.segments, "path segments N");
  transport->add_option("--iters", f.iters, "optimizer sweeps per level");
  transport->add_option("--rho0", f.rho0, "matrix JSON of the first endpoint")->check(CLI::ExistingFile);
  transport->add_option("--rho1", f.rho1, "matrix JSON of the second endpoint")->check(CLI::ExistingFile);
  auto* reproduce = app.add_subcommand("reproduce", "run the acceptance suite");
  reproduce->add_option("--seed", f.seed, "random seed (default 7)");
  reproduce->add_option("--threads", f.threads, "worker threads");
  reproduce->add_option("--criterion", f.criteria, "run only these criteria (repeatable)");
  reproduce->add_option("--output,-o", f.output, "JSON summary path");
  reproduce->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kError;
  }

  try {
    if (*zoo_list) return cmd_zoo_list();
    if (*zoo_build) return cmd_zoo_build(zoo_name, f.params, zoo_build->remaining(), f.output);
    if (*verify) return cmd_verify(resolve(*verify, f));
    if (*ge) return cmd_ge_check(resolve(*ge, f));
    if (*cge) return cmd_cge_check(resolve(*cge, f));
    if (*optk) return cmd_optimal_k(resolve(*optk, f));
    if (*inter) return cmd_intertwine(resolve(*inter, f));
    if (*tensor) return cmd_tensor(resolve(*tensor, f));
    if (*mlsi) return cmd_mlsi(resolve(*mlsi, f));
    if (*fisher) return cmd_fisher_decay(resolve(*fisher, f));
    if (*transport) return cmd_transport(resolve(*transport, f), f);
    if (*reproduce) return cmd_reproduce(resolve(*reproduce, f), f.criteria);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
