#include "ncgrad/serialize.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ncgrad {

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("expected a number, got " + j.dump());
}

Json to_json(const Matrix& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) data.push_back({m(i, k).real(), m(i, k).imag()});
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw std::invalid_argument("matrix: expected {rows, cols, data}");
  }
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const Json& data = j.at("data");
  if (rows < 0 || cols < 0 || !data.is_array() || static_cast<Index>(data.size()) != rows * cols) {
    throw std::invalid_argument("matrix: data length does not match rows * cols");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index k = 0; k < cols; ++k) {
      const Json& entry = data[static_cast<std::size_t>(i * cols + k)];
      if (entry.is_number()) {
        m(i, k) = entry.get<double>();
      } else if (entry.is_array() && entry.size() == 2) {
        m(i, k) = Complex(entry[0].get<double>(), entry[1].get<double>());
      } else {
        throw std::invalid_argument("matrix: entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

Json to_json(const TracialAlgebra& algebra) {
  return {{"blocks", algebra.block_dims()}, {"weights", algebra.block_weights()}};
}

TracialAlgebra algebra_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("blocks")) throw std::invalid_argument("algebra: expected {blocks, weights}");
  auto blocks = j.at("blocks").get<std::vector<int>>();
  std::vector<double> weights;
  if (j.contains("weights")) {
    weights = j.at("weights").get<std::vector<double>>();
  } else {
    // Default: the trace proportional to the unnormalized matrix trace.
    int total = 0;
    for (int d : blocks) total += d;
    for (int d : blocks) weights.push_back(static_cast<double>(d) / total);
  }
  return TracialAlgebra(std::move(blocks), std::move(weights));
}

Json to_json(const ZooModel& model) {
  Json jumps = Json::array();
  for (const auto& jump : model.generator.jumps()) jumps.push_back({{"weight", jump.weight}, {"v", to_json(jump.v)}});
  Json out = {{"name", model.name},
              {"proven_k", number(model.proven_k)},
              {"reference", model.reference},
              {"algebra", to_json(model.generator.algebra())},
              {"jumps", std::move(jumps)}};
  out["restriction"] = model.restriction ? to_json(model.restriction->basis()) : Json(nullptr);
  return out;
}

ZooModel model_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("algebra") || !j.contains("jumps")) {
    throw std::invalid_argument("model: expected {algebra, jumps, ...}");
  }
  TracialAlgebra algebra = algebra_from_json(j.at("algebra"));
  std::vector<Jump> jumps;
  for (const auto& entry : j.at("jumps")) {
    jumps.push_back({entry.at("weight").get<double>(), matrix_from_json(entry.at("v"))});
  }
  std::optional<Subalgebra> restriction;
  if (j.contains("restriction") && !j.at("restriction").is_null()) {
    restriction = Subalgebra::from_gns_basis(algebra, matrix_from_json(j.at("restriction")), 1e-8);
  }
  LindbladGenerator generator(algebra, std::move(jumps));
  const double k = j.contains("proven_k") ? number_from_json(j.at("proven_k")) : std::nan("");
  return {j.value("name", std::string("custom")), std::move(generator), k, j.value("reference", std::string()),
          std::move(restriction), std::nullopt};
}

Json to_json(const QmsReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"property", c.property}, {"passed", c.passed}, {"residual", number(c.residual)},
                      {"witness", c.witness}});
  }
  return {{"passed", report.passed}, {"checks", std::move(checks)}};
}

Json to_json(const MeanAuditReport& r) {
  return {{"mean", r.mean},
          {"passed", r.passed},
          {"monotonicity_margin", number(r.monotonicity_margin)},
          {"transformer_margin", number(r.transformer_margin)},
          {"normalization_error", number(r.normalization_error)},
          {"symmetric_on_grid", r.symmetric_on_grid},
          {"symmetry_flag_consistent", r.symmetry_flag_consistent},
          {"scalar_monotone", r.scalar_monotone},
          {"witness", r.witness}};
}

Json to_json(const GEReport& r) {
  Json points = Json::array();
  for (const auto& p : r.points) {
    points.push_back({{"t", p.t}, {"rho_id", p.rho_id}, {"rho_kind", p.rho_kind}, {"min_eig", number(p.min_eig)}});
  }
  Json witness = {{"t", r.witness.t}, {"rho_id", r.witness.rho_id}};
  if (!r.pass) {
    witness["rho"] = to_json(r.witness.rho);
    witness["direction"] = to_json(r.witness.direction);
  }
  return {{"model", r.model},       {"mean", r.mean},   {"K", number(r.k)},
          {"mode", r.mode},         {"tol", r.tol},     {"points", std::move(points)},
          {"global_min", number(r.global_min)},         {"pass", r.pass},
          {"witness", std::move(witness)},              {"seed", r.seed},
          {"runtime_ms", r.runtime_ms}};
}

Json to_json(const OptimalKGlobal& r) {
  Json per_t = Json::array();
  for (double k : r.per_t) per_t.push_back(number(k));
  return {{"k_star", number(r.k_star)},
          {"t_star", r.t_star},
          {"small_t_edge", r.small_t_edge},
          {"large_t_edge", r.large_t_edge},
          {"per_t", std::move(per_t)},
          {"rho_star", to_json(r.rho_star)},
          {"restarts", r.restarts},
          {"evaluations", r.evaluations},
          {"seed", r.seed},
          {"runtime_ms", r.runtime_ms}};
}

Json to_json(const IntertwineReport& r) {
  Json points = Json::array();
  for (const auto& p : r.points) {
    points.push_back({{"t", p.t}, {"rho_id", p.rho_id}, {"left_margin", number(p.left_margin)},
                      {"right_margin", number(p.right_margin)}});
  }
  return {{"pass", r.pass},
          {"K", number(r.k)},
          {"max_intertwining_residual", number(r.max_intertwining_residual)},
          {"min_left_margin", number(r.min_left_margin)},
          {"min_right_margin", number(r.min_right_margin)},
          {"j_commuting", r.j_commuting},
          {"max_j_residual", number(r.max_j_residual)},
          {"points", std::move(points)},
          {"witness", r.witness}};
}

Json to_json(const FisherDecayReport& r) {
  Json points = Json::array();
  for (const auto& p : r.points) {
    points.push_back({{"t", p.t}, {"rho_id", p.rho_id}, {"fisher_evolved", number(p.fisher_evolved)},
                      {"bound", number(p.bound)}, {"margin", number(p.margin)}});
  }
  return {{"K", number(r.k)},
          {"pass", r.pass},
          {"min_margin", number(r.min_margin)},
          {"fitted_exponent", number(r.fitted_exponent)},
          {"points", std::move(points)}};
}

Json to_json(const MlsiEstimate& e) {
  return {{"estimate", number(e.estimate)},
          {"valid_samples", e.valid_samples},
          {"evaluations", e.evaluations},
          {"argmin", to_json(e.argmin)}};
}

Json to_json(const TransportResult& r) {
  Json densities = Json::array();
  for (const auto& m : r.path.densities) densities.push_back(to_json(m));
  Json potentials = Json::array();
  for (const auto& m : r.path.potentials) potentials.push_back(to_json(m));
  Json energy = Json::array();
  for (double e : r.energy_trace) energy.push_back(number(e));
  Json length = Json::array();
  for (double l : r.length_trace) length.push_back(number(l));
  return {{"bound", number(r.bound)},
          {"label", "discretized upper bound"},
          {"energy", number(r.energy)},
          {"segments", r.path.densities.empty() ? 0 : static_cast<int>(r.path.densities.size()) - 1},
          {"levels", r.levels},
          {"mean", r.path.mean},
          {"densities", std::move(densities)},
          {"potentials", std::move(potentials)},
          {"energy_trace", std::move(energy)},
          {"length_trace", std::move(length)}};
}

}  // namespace ncgrad
