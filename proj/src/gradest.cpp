#include "ncgrad/gradest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ncgrad/parallel.hpp"
#include "ncgrad/search.hpp"

namespace ncgrad {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

double operator_norm_hermitian(const Matrix& v) {
  const auto spec = eig_hermitian(v);
  return std::max(std::abs(spec.eigenvalues(0)), std::abs(spec.eigenvalues(spec.dim() - 1)));
}

Matrix compress(const GradientSetup& setup, const Matrix& g) {
  if (!setup.restriction()) return g;
  return hermitian_part(setup.basis().adjoint() * g * setup.basis());
}

Matrix evolve(const GradientSetup& setup, double t, const Matrix& rho) {
  return hermitian_part(setup.semigroup().apply(t, rho));
}

}  // namespace

GradientSetup::GradientSetup(LindbladGenerator generator, std::optional<Subalgebra> restriction)
    : generator_(std::move(generator)),
      module_(generator_),
      semigroup_(generator_),
      restriction_(std::move(restriction)) {
  const int n = generator_.algebra().gns_dim();
  if (restriction_) {
    if (!(restriction_->algebra() == generator_.algebra())) {
      throw std::invalid_argument("GradientSetup: restriction lives in a different algebra");
    }
    basis_ = restriction_->basis();
    const Matrix& l = generator_.superop();
    const Matrix leak = (Matrix::Identity(n, n) - restriction_->projector()) * l * basis_;
    if (leak.norm() > 1e-9 * (1.0 + l.norm())) {
      throw NumericalError("GradientSetup: generator does not leave the restriction subalgebra invariant");
    }
  } else {
    basis_ = Matrix::Identity(n, n);
  }
  for (const auto& jump : generator_.jumps()) {
    const double norm = operator_norm_hermitian(jump.v);
    jump_scale_ += jump.weight * norm * norm;
  }
}

Matrix weighted_dirichlet(const GradientSetup& setup, const OperatorMean& mean, const Matrix& sigma) {
  const int n = setup.algebra().gns_dim();
  const Matrix block = RhoHat(mean, setup.algebra(), sigma).block_matrix();
  Matrix out = Matrix::Zero(n, n);
  for (int j = 0; j < setup.module().components(); ++j) {
    const Matrix& d = setup.module().derivation_superop(j);
    out.noalias() += d.adjoint() * block * d;
  }
  return hermitian_part(out);
}

Matrix ge_form(const GradientSetup& setup, const OperatorMean& mean, double t, const DensityOperator& rho,
               double k) {
  const Matrix pt = setup.semigroup().superop(t);
  const Matrix b = weighted_dirichlet(setup, mean, evolve(setup, t, rho.matrix()));
  const Matrix a = pt * weighted_dirichlet(setup, mean, rho.matrix()) * pt;
  return compress(setup, hermitian_part(std::exp(-2.0 * k * t) * b - a));
}

std::string to_string(GEMode mode) {
  switch (mode) {
    case GEMode::automatic: return "auto";
    case GEMode::exact: return "exact";
    case GEMode::sampled: return "sampled";
  }
  return "auto";
}

GEMode parse_ge_mode(const std::string& name) {
  if (name == "auto") return GEMode::automatic;
  if (name == "exact") return GEMode::exact;
  if (name == "sampled") return GEMode::sampled;
  throw std::invalid_argument("unknown mode '" + name + "' (expected auto|exact|sampled)");
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (points <= 0 || !(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log_grid: bad range");
  std::vector<double> out;
  if (points == 1) return {lo};
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < points; ++i) out.push_back(lo * std::exp(ratio * i / (points - 1)));
  out.back() = hi;
  return out;
}

std::vector<double> default_t_grid() { return log_grid(1e-3, 10.0, 40); }

// ---------------------------------------------------------------------------
// Density samples

namespace {

constexpr double kSmoothing = 1e-6;

Matrix smooth(const TracialAlgebra& algebra, const Matrix& psd) {
  const Matrix rho = psd / algebra.trace(psd).real();
  return (1.0 - kSmoothing) * rho + kSmoothing * algebra.identity();
}

// Drops the lowest eigenspace (or keeps only the top one), blockwise; the
// result stays in any *-subalgebra containing x.
Matrix spectral_truncate(const TracialAlgebra& algebra, const Matrix& x, bool top_only) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& spec : algebra.block_eig(x)) {
    lo = std::min(lo, spec.eigenvalues(0));
    hi = std::max(hi, spec.eigenvalues(spec.dim() - 1));
  }
  const double gap = 1e-8 * std::max(1.0, std::abs(hi));
  if (hi - lo <= gap) return x;
  return algebra.apply_function(x, [&](double lambda) {
    if (top_only) return lambda >= hi - gap ? lambda : 0.0;
    return lambda <= lo + gap ? 0.0 : lambda;
  });
}

}  // namespace

DensitySample density_sample(const GradientSetup& setup, std::uint64_t seed, int index) {
  const auto& algebra = setup.algebra();
  if (index == 0) return {DensityOperator::trace_state(algebra), "trace"};
  Rng rng = stream_rng(seed, static_cast<std::uint64_t>(index));
  const int slot = index % 10;
  if (setup.restriction()) {
    const Subalgebra& sub = *setup.restriction();
    const Matrix g = random_gaussian(algebra.dim(), algebra.dim(), rng);
    const DensityOperator generic = subalgebra_density(sub, algebra.pinch(g));
    if (slot < 7) return {generic, "wishart"};
    const bool pure = slot == 9;
    const Matrix cut = spectral_truncate(algebra, generic.matrix(), pure);
    return {DensityOperator::normalized(algebra, hermitian_part(smooth(algebra, cut))), pure ? "pure" : "near_singular"};
  }
  if (slot < 7) return {wishart_density(algebra, rng), "wishart"};
  if (slot < 9) return {near_singular_density(algebra, rng, kSmoothing), "near_singular"};
  const DensityOperator low = wishart_density(algebra, rng, 1);
  return {DensityOperator::normalized(algebra, hermitian_part(smooth(algebra, low.matrix()))), "pure"};
}

// ---------------------------------------------------------------------------
// GE sweep

namespace {

// Matrix-free G in restriction coordinates.
class FormApplier {
 public:
  FormApplier(const GradientSetup& setup, const OperatorMean& mean, double t, const Matrix& rho, double k)
      : setup_(setup),
        t_(t),
        decay_(std::exp(-2.0 * k * t)),
        evolved_(evolve(setup, t, rho)),
        hat_rho_(mean, setup.algebra(), rho),
        hat_evolved_(mean, setup.algebra(), evolved_) {}

  [[nodiscard]] Vector operator()(const Vector& c) const {
    const auto& algebra = setup_.algebra();
    const auto& module = setup_.module();
    const Matrix x = algebra.from_gns(setup_.basis() * c);
    const Matrix y = setup_.semigroup().apply(t_, x);
    Matrix first = algebra.zero();
    Matrix second = algebra.zero();
    for (int j = 0; j < module.components(); ++j) {
      // d_j is GNS-self-adjoint: <[w,x], y> = <x, [w,y]> for Hermitian w.
      first += module.partial(j, hat_evolved_.apply(module.partial(j, x)));
      second += module.partial(j, hat_rho_.apply(module.partial(j, y)));
    }
    const Matrix out = decay_ * first - setup_.semigroup().apply(t_, second);
    return setup_.basis().adjoint() * algebra.to_gns(out);
  }

  /// Upper bound on the top of the spectrum of G.
  [[nodiscard]] double shift() const {
    const double lambda_max = -setup_.algebra().min_eigenvalue(-evolved_);
    return decay_ * 4.0 * setup_.jump_scale() * lambda_max + 1e-12;
  }

 private:
  const GradientSetup& setup_;
  double t_;
  double decay_;
  Matrix evolved_;
  RhoHat hat_rho_;
  RhoHat hat_evolved_;
};

struct PointOutcome {
  double min_eig = 0.0;
  Vector direction;
};

PointOutcome sampled_min(const FormApplier& form, int dim, int directions, int refinements, Rng& rng) {
  PointOutcome best;
  best.min_eig = std::numeric_limits<double>::infinity();
  auto rayleigh = [&form](const Vector& v, Vector* image) {
    *image = form(v);
    return v.dot(*image).real() / v.squaredNorm();
  };
  Vector image;
  for (int d = 0; d < directions; ++d) {
    const Vector v = random_gaussian(dim, 1, rng).col(0);
    const double q = rayleigh(v, &image);
    if (q < best.min_eig) {
      best.min_eig = q;
      best.direction = v.normalized();
    }
  }
  if (best.direction.size() == 0) {
    best.direction = random_gaussian(dim, 1, rng).col(0).normalized();
    best.min_eig = rayleigh(best.direction, &image);
  }
  const double sigma = std::max(form.shift(), 0.0) + std::abs(best.min_eig);
  Vector v = best.direction;
  for (int it = 0; it < refinements; ++it) {
    const double q = rayleigh(v, &image);
    if (q < best.min_eig) {
      best.min_eig = q;
      best.direction = v;
    }
    Vector next = sigma * v - image;
    const double norm = next.norm();
    if (!(norm > 0.0)) break;
    v = next / norm;
  }
  return best;
}

}  // namespace

GEReport ge_check(const GradientSetup& setup, const OperatorMean& mean, double k, const SamplerConfig& config,
                  const DensitySampler& sampler, const std::string& model) {
  const auto start = std::chrono::steady_clock::now();
  if (config.num_rho <= 0 || config.t_grid.empty()) throw std::invalid_argument("ge_check: empty sample grid");
  for (double t : config.t_grid) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("ge_check: t must be finite and >= 0");
  }
  const int dim = setup.form_dim();
  const bool fits = static_cast<long>(dim) * dim <= kExactCap;
  GEMode mode = config.mode;
  if (mode == GEMode::automatic) mode = fits ? GEMode::exact : GEMode::sampled;
  if (mode == GEMode::exact && !fits) {
    throw std::invalid_argument("exact mode needs form dimension^2 <= " + std::to_string(kExactCap) + " (got " +
                                std::to_string(dim) + "^2); use sampled mode");
  }

  GEReport report;
  report.model = model;
  report.mean = std::string(mean.name());
  report.k = k;
  report.mode = to_string(mode);
  report.seed = config.seed;
  report.tol = config.tol;

  std::vector<DensitySample> densities;
  densities.reserve(static_cast<std::size_t>(config.num_rho));
  for (int i = 0; i < config.num_rho; ++i) densities.push_back(sampler(i));

  const std::size_t num_t = config.t_grid.size();
  const std::size_t num_points = num_t * densities.size();
  report.points.resize(num_points);
  std::vector<Vector> directions(num_points);

  std::vector<Matrix> semigroups;
  std::vector<Matrix> dirichlet_rho;
  if (mode == GEMode::exact) {
    for (double t : config.t_grid) semigroups.push_back(setup.semigroup().superop(t));
    for (const auto& sample : densities) dirichlet_rho.push_back(weighted_dirichlet(setup, mean, sample.rho.matrix()));
  }

  parallel_for(num_points, resolve_threads(config.threads), [&](std::size_t idx) {
    const std::size_t ti = idx / densities.size();
    const std::size_t ri = idx % densities.size();
    const double t = config.t_grid[ti];
    const Matrix& rho = densities[ri].rho.matrix();
    GEPoint& point = report.points[idx];
    point.t = t;
    point.rho_id = static_cast<int>(ri);
    point.rho_kind = densities[ri].kind;
    if (mode == GEMode::exact) {
      const Matrix& pt = semigroups[ti];
      const Matrix b = weighted_dirichlet(setup, mean, evolve(setup, t, rho));
      const Matrix g = compress(setup, hermitian_part(std::exp(-2.0 * k * t) * b - pt * dirichlet_rho[ri] * pt));
      const auto spec = eig_hermitian(g);
      point.min_eig = spec.eigenvalues(0);
      directions[idx] = spec.eigenvectors.col(0);
    } else {
      Rng rng = stream_rng(config.seed ^ 0x5bd1e9955bd1e995ULL, idx);
      const FormApplier form(setup, mean, t, rho, k);
      auto outcome = sampled_min(form, dim, config.directions, config.refinements, rng);
      point.min_eig = outcome.min_eig;
      directions[idx] = std::move(outcome.direction);
    }
  });

  std::size_t worst = 0;
  for (std::size_t idx = 1; idx < num_points; ++idx) {
    if (report.points[idx].min_eig < report.points[worst].min_eig) worst = idx;
  }
  report.global_min = report.points[worst].min_eig;
  report.pass = report.global_min >= -config.tol;
  report.witness.t = report.points[worst].t;
  report.witness.rho_id = report.points[worst].rho_id;
  report.witness.rho = densities[static_cast<std::size_t>(report.witness.rho_id)].rho.matrix();
  report.witness.direction = setup.algebra().from_gns(setup.basis() * directions[worst]);
  report.runtime_ms = elapsed_ms(start);
  return report;
}

GEReport ge_check(const GradientSetup& setup, const OperatorMean& mean, double k, const SamplerConfig& config,
                  const std::string& model) {
  return ge_check(
      setup, mean, k, config, [&](int index) { return density_sample(setup, config.seed, index); }, model);
}

// ---------------------------------------------------------------------------
// Optimal constants

namespace {

OptimalK pencil_to_k(const PencilResult& pencil, double t) {
  OptimalK out;
  out.rank = pencil.rank;
  out.c_star = pencil.value;
  switch (pencil.status) {
    case PencilResult::Status::zero:
      out.status = OptimalK::Status::unbounded;
      out.k = std::numeric_limits<double>::infinity();
      break;
    case PencilResult::Status::unbounded:
      out.status = OptimalK::Status::infeasible;
      out.k = -std::numeric_limits<double>::infinity();
      break;
    case PencilResult::Status::finite:
      out.k = -std::log(pencil.value) / (2.0 * t);
      break;
  }
  return out;
}

OptimalK optimal_k_cached(const GradientSetup& setup, const OperatorMean& mean, double t, const Matrix& pt,
                          const Matrix& dirichlet_rho, const Matrix& rho) {
  const Matrix a = compress(setup, hermitian_part(pt * dirichlet_rho * pt));
  const Matrix b = compress(setup, weighted_dirichlet(setup, mean, evolve(setup, t, rho)));
  return pencil_to_k(largest_generalized_eigenvalue(a, b), t);
}

}  // namespace

OptimalK optimal_k(const GradientSetup& setup, const OperatorMean& mean, double t, const DensityOperator& rho) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("optimal_k: t must be finite and > 0");
  return optimal_k_cached(setup, mean, t, setup.semigroup().superop(t),
                          weighted_dirichlet(setup, mean, rho.matrix()), rho.matrix());
}

namespace {

struct SearchState {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> per_t;
  Matrix rho;
};

class KObjective {
 public:
  KObjective(const GradientSetup& setup, const OperatorMean& mean, const std::vector<double>& t_grid)
      : setup_(setup), mean_(mean), t_grid_(t_grid) {
    for (double t : t_grid) semigroups_.push_back(setup.semigroup().superop(t));
  }

  // Density x x^dagger / tau from coordinates in the test space; invalid
  // points (vanishing trace, ambiguous pencil rank) evaluate to +inf.
  SearchState operator()(const Vector& coords) {
    SearchState state;
    ++evaluations;
    const auto& algebra = setup_.algebra();
    const Matrix x = algebra.from_gns(setup_.basis() * coords);
    const Matrix psd = hermitian_part(x * x.adjoint());
    const double tr = algebra.trace(psd).real();
    if (!(tr > 1e-300)) return state;
    state.rho = psd / tr;
    try {
      const Matrix dirichlet = weighted_dirichlet(setup_, mean_, state.rho);
      for (std::size_t i = 0; i < t_grid_.size(); ++i) {
        const OptimalK k = optimal_k_cached(setup_, mean_, t_grid_[i], semigroups_[i], dirichlet, state.rho);
        state.per_t.push_back(k.k);
        state.value = std::min(state.value, k.k);
      }
    } catch (const NumericalError&) {
      state.value = std::numeric_limits<double>::infinity();
      state.per_t.clear();
    }
    return state;
  }

  long evaluations = 0;

 private:
  const GradientSetup& setup_;
  const OperatorMean& mean_;
  const std::vector<double>& t_grid_;
  std::vector<Matrix> semigroups_;
};

Vector initial_coords(const GradientSetup& setup, std::uint64_t seed, int restart) {
  const auto& algebra = setup.algebra();
  Matrix root;
  if (restart == 0) {
    root = algebra.identity();
  } else if (restart % 2 == 1) {
    root = algebra.apply_function(density_sample(setup, seed, restart).rho.matrix(),
                                  [](double v) { return std::sqrt(std::max(v, 0.0)); });
  } else {
    // Every other restart starts from a near-singular or pure sample.
    const int index = 7 + 10 * (restart / 2) + (restart / 2) % 3;
    root = algebra.apply_function(density_sample(setup, seed, index).rho.matrix(),
                                  [](double v) { return std::sqrt(std::max(v, 0.0)); });
  }
  return setup.basis().adjoint() * algebra.to_gns(root);
}

}  // namespace

OptimalKGlobal optimal_k_global(const GradientSetup& setup, const OperatorMean& mean, const OptimalKConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.t_grid.empty() || config.restarts <= 0) throw std::invalid_argument("optimal_k_global: empty search");
  for (double t : config.t_grid) {
    if (!(t > 0.0)) throw std::invalid_argument("optimal_k_global: grid times must be > 0");
  }
  std::vector<SearchState> results(static_cast<std::size_t>(config.restarts));
  std::vector<long> evaluations(results.size(), 0);
  parallel_for(results.size(), resolve_threads(config.threads), [&](std::size_t r) {
    KObjective objective(setup, mean, config.t_grid);
    const DescentOptions options{config.initial_step, config.min_step, config.max_sweeps, true};
    const DescentResult found = coordinate_descent([&](const Vector& c) { return objective(c).value; },
                                                   initial_coords(setup, config.seed, static_cast<int>(r)), options);
    results[r] = objective(found.argmin);
    evaluations[r] = objective.evaluations;
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r].value < results[best].value) best = r;
  }
  OptimalKGlobal out;
  out.k_star = results[best].value;
  out.rho_star = results[best].rho;
  out.per_t = results[best].per_t;
  out.restarts = config.restarts;
  out.seed = config.seed;
  for (long e : evaluations) out.evaluations += e;
  if (!out.per_t.empty()) {
    const auto it = std::min_element(out.per_t.begin(), out.per_t.end());
    const auto idx = static_cast<std::size_t>(it - out.per_t.begin());
    out.t_star = config.t_grid[idx];
    out.small_t_edge = idx == 0;
    out.large_t_edge = idx + 1 == out.per_t.size();
  }
  out.runtime_ms = elapsed_ms(start);
  return out;
}

// ---------------------------------------------------------------------------
// Tensor constructions

LindbladGenerator tensor_generator(const LindbladGenerator& first, const LindbladGenerator& second) {
  const TracialAlgebra algebra = tensor(first.algebra(), second.algebra());
  const int n1 = first.algebra().dim();
  const int n2 = second.algebra().dim();
  std::vector<Jump> jumps;
  for (const auto& jump : first.jumps()) jumps.push_back({jump.weight, kron(jump.v, Matrix::Identity(n2, n2))});
  for (const auto& jump : second.jumps()) jumps.push_back({jump.weight, kron(Matrix::Identity(n1, n1), jump.v)});
  return LindbladGenerator(algebra, std::move(jumps));
}

LindbladGenerator ampliate(const LindbladGenerator& generator, int ancilla_dim) {
  if (ancilla_dim < 1) throw std::invalid_argument("ampliate: ancilla dimension must be >= 1");
  return tensor_generator(generator, LindbladGenerator(TracialAlgebra::full(ancilla_dim), {}));
}

GEReport cge_check(const GradientSetup& setup, const OperatorMean& mean, double k, int ancilla_dim,
                   const SamplerConfig& config, const std::string& model) {
  if (setup.restriction()) throw std::invalid_argument("cge_check: restricted setups are not supported");
  const GradientSetup amplified(ampliate(setup.generator(), ancilla_dim));
  const int n1 = setup.algebra().dim();
  const auto& algebra = amplified.algebra();
  auto sampler = [&](int index) -> DensitySample {
    if (index == 0 || index % 10 != 9) return density_sample(amplified, config.seed, index);
    Rng rng = stream_rng(config.seed, static_cast<std::uint64_t>(index));
    if ((index / 10) % 2 == 0) {
      Vector omega = Vector::Zero(algebra.dim());
      for (int i = 0; i < std::min(n1, ancilla_dim); ++i) omega(i * ancilla_dim + i) = 1.0;
      const Matrix psd = omega * omega.adjoint();
      return {DensityOperator::normalized(algebra, hermitian_part(smooth(algebra, psd))), "entangled"};
    }
    const Matrix left = wishart_density(setup.algebra(), rng).matrix();
    const Matrix right = wishart_density(TracialAlgebra::full(ancilla_dim), rng).matrix();
    return {DensityOperator::normalized(algebra, hermitian_part(kron(left, right))), "product"};
  };
  return ge_check(amplified, mean, k, config, sampler, model + "+ancilla" + std::to_string(ancilla_dim));
}

GEReport tensor_ge_harness(const LindbladGenerator& first, const LindbladGenerator& second, const OperatorMean& mean,
                           double k, const SamplerConfig& config, const std::string& model) {
  const GradientSetup setup(tensor_generator(first, second));
  return ge_check(setup, mean, k, config, model);
}

// ---------------------------------------------------------------------------
// Intertwining

CandidateFamily direct_sum_candidate(const GradientSetup& setup, double rate) {
  const Semigroup semigroup = setup.semigroup();
  const int n = setup.module().components();
  return [semigroup, n, rate](double t) {
    return Matrix(std::exp(-rate * t) * kron(Matrix::Identity(n, n), semigroup.superop(t)));
  };
}

CandidateFamily scalar_candidate(const GradientSetup& setup, double rate) {
  const Index size = static_cast<Index>(setup.module().components()) * setup.algebra().gns_dim();
  return [size, rate](double t) { return Matrix(std::exp(-rate * t) * Matrix::Identity(size, size)); };
}

IntertwineReport intertwine_check(const GradientSetup& setup, const CandidateFamily& candidate, double k,
                                  int samples, std::uint64_t seed, double tol) {
  if (samples <= 0) throw std::invalid_argument("intertwine_check: samples must be positive");
  const auto& algebra = setup.algebra();
  const int n = setup.module().components();
  const Matrix d = setup.module().stacked();
  const Matrix id_n = Matrix::Identity(n, n);
  const Matrix swap = kron(id_n, algebra.transpose_permutation());
  const double scale = 1.0 + d.norm();

  IntertwineReport report;
  report.k = k;
  report.min_left_margin = std::numeric_limits<double>::infinity();
  report.min_right_margin = std::numeric_limits<double>::infinity();
  const std::vector<double> times = log_grid(1e-2, 5.0, samples);
  bool first_failure = true;
  for (int i = 0; i < samples; ++i) {
    const double t = times[static_cast<std::size_t>(i)];
    const Matrix v = candidate(t);
    if (v.rows() != d.rows() || v.cols() != d.rows()) {
      throw std::invalid_argument("intertwine_check: candidate has the wrong size");
    }
    const Matrix pt = setup.semigroup().superop(t);
    const Matrix rho = density_sample(setup, seed, i).rho.matrix();
    const Matrix evolved = evolve(setup, t, rho);
    const double decay = std::exp(-2.0 * k * t);

    const double residual = (d * pt - v * d).norm();
    const Matrix left = decay * kron(id_n, algebra.left_multiplication(evolved)) -
                        v.adjoint() * kron(id_n, algebra.left_multiplication(rho)) * v;
    const Matrix right = decay * kron(id_n, algebra.right_multiplication(evolved)) -
                         v.adjoint() * kron(id_n, algebra.right_multiplication(rho)) * v;
    IntertwinePoint point{t, i, eig_hermitian(left).eigenvalues(0), eig_hermitian(right).eigenvalues(0)};
    report.points.push_back(point);
    report.max_intertwining_residual = std::max(report.max_intertwining_residual, residual);
    report.min_left_margin = std::min(report.min_left_margin, point.left_margin);
    report.min_right_margin = std::min(report.min_right_margin, point.right_margin);
    report.max_j_residual = std::max(report.max_j_residual, (swap * v.conjugate() * swap - v).norm());

    const bool ok = residual <= 1e-9 * scale && point.left_margin >= -tol && point.right_margin >= -tol;
    if (!ok && first_failure) {
      std::ostringstream msg;
      msg << "t=" << t << " rho_id=" << i << " residual=" << residual << " left=" << point.left_margin
          << " right=" << point.right_margin;
      report.witness = msg.str();
      first_failure = false;
    }
    report.pass = report.pass && ok;
  }
  report.j_commuting = report.max_j_residual <= 1e-9 * (1.0 + d.norm());
  return report;
}

Matrix bakry_emery_margin(const GradientSetup& setup, double t, double k, const Matrix& a) {
  const auto& semigroup = setup.semigroup();
  const auto& module = setup.module();
  const Matrix evolved = semigroup.apply(t, a);
  return hermitian_part(std::exp(-2.0 * k * t) * semigroup.apply(t, module.gamma(a, a)) -
                        module.gamma(evolved, evolved));
}

}  // namespace ncgrad
