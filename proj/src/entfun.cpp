#include "ncgrad/entfun.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ncgrad/parallel.hpp"
#include "ncgrad/search.hpp"

namespace ncgrad {

namespace {

constexpr double kSupportThreshold = 1e-12;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

double entropy(const TracialAlgebra& algebra, const DensityOperator& rho) {
  return algebra.trace(algebra.apply_function(rho.matrix(), xlogx)).real();
}

double relative_entropy(const TracialAlgebra& algebra, const DensityOperator& rho, const DensityOperator& sigma) {
  const Matrix kernel =
      algebra.apply_function(sigma.matrix(), [](double x) { return x < kSupportThreshold ? 1.0 : 0.0; });
  if (algebra.trace(kernel * rho.matrix()).real() > kSupportThreshold) return std::numeric_limits<double>::infinity();
  const Matrix log_sigma =
      algebra.apply_function(sigma.matrix(), [](double x) { return x < kSupportThreshold ? 0.0 : std::log(x); });
  return entropy(algebra, rho) - algebra.trace(rho.matrix() * log_sigma).real();
}

EntropyFixPaths entropy_fix_paths(const Subalgebra& fix, const DensityOperator& rho) {
  const auto& algebra = fix.algebra();
  const DensityOperator projected = DensityOperator::normalized(algebra, hermitian_part(fix.expectation(rho.matrix())));
  return {relative_entropy(algebra, rho, projected), entropy(algebra, rho) - entropy(algebra, projected)};
}

double entropy_fix(const Subalgebra& fix, const DensityOperator& rho) {
  const auto paths = entropy_fix_paths(fix, rho);
  if (!(std::abs(paths.relative - paths.difference) <= 1e-9 * (1.0 + std::abs(paths.relative)))) {
    std::ostringstream msg;
    msg << "entropy_fix: paths disagree (" << paths.relative << " vs " << paths.difference << ")";
    throw NumericalError(msg.str());
  }
  return paths.relative;
}

double entropy_fix(const LindbladGenerator& generator, const DensityOperator& rho) {
  return entropy_fix(fixed_point_algebra(generator).algebra, rho);
}

// ---------------------------------------------------------------------------

namespace {

struct FullSupportFisher {
  double value = 0.0;
  double cross_check = 0.0;
};

FullSupportFisher fisher_full_support(const LindbladGenerator& generator, const Matrix& rho) {
  const auto& algebra = generator.algebra();
  const Matrix log_rho = algebra.apply_function(rho, [](double x) { return std::log(x); });
  const double value = algebra.trace(generator.apply(rho) * log_rho).real();
  double dirichlet = 0.0;
  for (const auto& jump : generator.jumps()) {
    dirichlet += jump.weight * algebra.gns_inner(commutator(jump.v, rho), commutator(jump.v, log_rho)).real();
  }
  return {value, std::abs(value - dirichlet)};
}

}  // namespace

FisherInformation fisher_information(const LindbladGenerator& generator, const DensityOperator& rho) {
  const auto& algebra = generator.algebra();
  FisherInformation out;
  if (algebra.min_eigenvalue(rho.matrix()) > kSupportThreshold) {
    const auto full = fisher_full_support(generator, rho.matrix());
    if (full.cross_check > 1e-8 * (1.0 + std::abs(full.value))) {
      std::ostringstream msg;
      msg << "fisher_information: Dirichlet-form cross-check off by " << full.cross_check;
      throw NumericalError(msg.str());
    }
    out.value = full.value;
    out.cross_check = full.cross_check;
    return out;
  }
  out.smoothed = true;
  out.epsilons = {1e-4, 1e-5, 1e-6};
  for (double eps : out.epsilons) {
    const Matrix smoothed = (1.0 - eps) * rho.matrix() + eps * algebra.identity();
    out.smoothed_values.push_back(fisher_full_support(generator, smoothed).value);
  }
  const auto& v = out.smoothed_values;
  const double d1 = v[1] - v[0];
  const double d2 = v[2] - v[1];
  if (std::abs(d2) > 0.5 * std::abs(d1) && std::abs(d2) > 1e-6 * (1.0 + std::abs(v[2]))) {
    out.finite = false;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  // I(eps) = I + c eps + o(eps), eps ratio 10.
  out.value = (10.0 * v[2] - v[1]) / 9.0;
  return out;
}

FisherDecayReport fisher_decay_check(const LindbladGenerator& generator, double k,
                                     const std::vector<DensityOperator>& densities,
                                     const std::vector<double>& t_grid, double tol) {
  const Semigroup semigroup(generator);
  FisherDecayReport report;
  report.k = k;
  report.min_margin = std::numeric_limits<double>::infinity();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < densities.size(); ++i) {
    const auto initial = fisher_information(generator, densities[i]);
    if (initial.smoothed) throw std::invalid_argument("fisher_decay_check: densities must have full support");
    for (double t : t_grid) {
      const auto evolved = fisher_information(generator, semigroup.apply(t, densities[i]));
      FisherDecayPoint point;
      point.t = t;
      point.rho_id = static_cast<int>(i);
      point.fisher_evolved = evolved.value;
      point.bound = std::exp(-2.0 * k * t) * initial.value;
      point.margin = point.bound - point.fisher_evolved;
      report.min_margin = std::min(report.min_margin, point.margin);
      report.points.push_back(point);
      if (t > 0.0 && initial.value > 1e-12 && evolved.value > 1e-14) {
        num += t * std::log(evolved.value / initial.value);
        den += t * t;
      }
    }
  }
  report.pass = report.min_margin >= -tol;
  report.fitted_exponent = den > 0.0 ? -num / den : 0.0;
  return report;
}

// ---------------------------------------------------------------------------

namespace {

// I / Ent_fix, or +inf where the ratio is undefined (fixed point, no full
// support, inconsistent entropy paths).
double mlsi_ratio(const LindbladGenerator& generator, const Subalgebra& fix, const DensityOperator& rho) {
  try {
    const double ent = entropy_fix(fix, rho);
    if (!(ent > 1e-10)) return std::numeric_limits<double>::infinity();
    const auto fisher = fisher_information(generator, rho);
    if (fisher.smoothed) return std::numeric_limits<double>::infinity();
    return fisher.value / ent;
  } catch (const NumericalError&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

MlsiEstimate mlsi_estimate(const GradientSetup& setup, const MlsiConfig& config) {
  if (config.samples <= 0) throw std::invalid_argument("mlsi_estimate: samples must be positive");
  const auto& generator = setup.generator();
  const auto& algebra = setup.algebra();
  const Subalgebra fix = fixed_point_algebra(generator).algebra;

  std::vector<Matrix> rhos(static_cast<std::size_t>(config.samples));
  std::vector<double> ratios(rhos.size());
  parallel_for(rhos.size(), resolve_threads(config.threads), [&](std::size_t i) {
    const auto sample = density_sample(setup, config.seed, static_cast<int>(i));
    rhos[i] = sample.rho.matrix();
    ratios[i] = mlsi_ratio(generator, fix, sample.rho);
  });

  MlsiEstimate out;
  out.evaluations = config.samples;
  std::vector<std::size_t> order(rhos.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ratios[a] < ratios[b]; });
  for (double r : ratios) out.valid_samples += std::isfinite(r) ? 1 : 0;
  if (out.valid_samples == 0) throw NumericalError("mlsi_estimate: no valid sample (all samples are fixed points)");
  out.estimate = ratios[order[0]];
  out.argmin = rhos[order[0]];

  auto objective = [&](const Vector& coords) {
    const Matrix x = algebra.from_gns(setup.basis() * coords);
    const Matrix psd = hermitian_part(x * x.adjoint());
    const double tr = algebra.trace(psd).real();
    if (!(tr > 1e-300)) return std::numeric_limits<double>::infinity();
    const Matrix rho = psd / tr;
    if (algebra.min_eigenvalue(rho) <= kSupportThreshold) return std::numeric_limits<double>::infinity();
    return mlsi_ratio(generator, fix, DensityOperator::normalized(algebra, rho));
  };
  const int descents = std::min(config.descents, out.valid_samples);
  std::vector<DescentResult> refined(static_cast<std::size_t>(std::max(descents, 0)));
  parallel_for(refined.size(), resolve_threads(config.threads), [&](std::size_t d) {
    const Matrix root = algebra.apply_function(rhos[order[d]], [](double v) { return std::sqrt(std::max(v, 0.0)); });
    const Vector start = setup.basis().adjoint() * algebra.to_gns(root);
    DescentOptions options;
    options.initial_step = 0.1;
    options.max_sweeps = config.max_sweeps;
    options.min_step = 1e-5;
    refined[d] = coordinate_descent(objective, start, options);
  });
  for (const auto& r : refined) {
    out.evaluations += r.evaluations;
    if (r.value < out.estimate) {
      out.estimate = r.value;
      const Matrix x = algebra.from_gns(setup.basis() * r.argmin);
      const Matrix psd = hermitian_part(x * x.adjoint());
      out.argmin = psd / algebra.trace(psd).real();
    }
  }
  return out;
}

std::vector<TrajectoryRow> entropy_trajectory(const GradientSetup& setup, const DensityOperator& rho,
                                              const std::vector<double>& t_grid) {
  std::vector<TrajectoryRow> rows;
  for (double t : t_grid) {
    const DensityOperator evolved = setup.semigroup().apply(t, rho);
    rows.push_back({t, entropy(setup.algebra(), evolved), fisher_information(setup.generator(), evolved).value});
  }
  return rows;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows) {
  out << "t,entropy,fisher\n" << std::setprecision(17);
  for (const auto& row : rows) out << row.t << ',' << row.entropy << ',' << row.fisher << '\n';
}

}  // namespace ncgrad
