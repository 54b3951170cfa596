#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ncgrad/means.hpp"

namespace ncgrad {

/// Generator together with its derived objects. When `restriction` is set,
/// every gradient estimate is taken over the invariant subalgebra N: both the
/// test element a and the density rho range over N (the generator must leave
/// N invariant; this is checked).
class GradientSetup {
 public:
  explicit GradientSetup(LindbladGenerator generator, std::optional<Subalgebra> restriction = std::nullopt);

  [[nodiscard]] const LindbladGenerator& generator() const { return generator_; }
  [[nodiscard]] const TangentModule& module() const { return module_; }
  [[nodiscard]] const Semigroup& semigroup() const { return semigroup_; }
  [[nodiscard]] const TracialAlgebra& algebra() const { return generator_.algebra(); }
  [[nodiscard]] const std::optional<Subalgebra>& restriction() const { return restriction_; }

  /// GNS-orthonormal basis of the test space (identity without restriction).
  [[nodiscard]] const Matrix& basis() const { return basis_; }
  [[nodiscard]] int form_dim() const { return static_cast<int>(basis_.cols()); }

  /// sum_j c_j ||v_j||_op^2: with m(s, t) <= max(s, t) for every builtin mean,
  /// 4 * this * lambda_max(sigma) bounds ||D^dagger M(sigma) D||.
  [[nodiscard]] double jump_scale() const { return jump_scale_; }

 private:
  LindbladGenerator generator_;
  TangentModule module_;
  Semigroup semigroup_;
  std::optional<Subalgebra> restriction_;
  Matrix basis_;
  double jump_scale_ = 0.0;
};

/// D^dagger M(sigma) D = sum_j d_j^dagger rho_hat(sigma) d_j on L^2(M), i.e.
/// the quadratic form a -> ||d a||_sigma^2.
[[nodiscard]] Matrix weighted_dirichlet(const GradientSetup& setup, const OperatorMean& mean, const Matrix& sigma);

/// G = e^{-2Kt} D^dagger M(P_t rho) D - (D P_t)^dagger M(rho) (D P_t),
/// compressed to the restriction basis when one is set. GE(K) holds at
/// (t, rho) iff G is PSD.
[[nodiscard]] Matrix ge_form(const GradientSetup& setup, const OperatorMean& mean, double t,
                             const DensityOperator& rho, double k);

enum class GEMode { automatic, exact, sampled };

[[nodiscard]] std::string to_string(GEMode mode);
/// "auto" | "exact" | "sampled"; throws std::invalid_argument otherwise.
[[nodiscard]] GEMode parse_ge_mode(const std::string& name);

/// Exact mode eigensolves G at every point; allowed while form_dim()^2 (the
/// number of superoperator entries) is at most this cap.
inline constexpr int kExactCap = 1296;

[[nodiscard]] std::vector<double> log_grid(double lo, double hi, int points);
/// 40 log-spaced points in [1e-3, 10].
[[nodiscard]] std::vector<double> default_t_grid();

struct SamplerConfig {
  int num_rho = 50;
  std::vector<double> t_grid = default_t_grid();
  std::uint64_t seed = 0;
  int threads = 0;
  GEMode mode = GEMode::automatic;
  double tol = 1e-8;
  int directions = 256;
  int refinements = 50;
};

struct DensitySample {
  DensityOperator rho;
  std::string kind;   // trace | wishart | near_singular | pure | entangled | product
};

/// Sample `index` of the density sweep: index 0 is the trace state; then by
/// index mod 10: 7 full-rank Wishart, 2 near-singular (1e-6 smoothing), 1
/// smoothed pure state. With a restriction, samples are E_N(g g^dagger)
/// normalized, and near-singular ones drop the lowest eigenspace.
[[nodiscard]] DensitySample density_sample(const GradientSetup& setup, std::uint64_t seed, int index);

struct GEPoint {
  double t = 0.0;
  int rho_id = 0;
  std::string rho_kind;
  double min_eig = 0.0;
};

struct GEWitness {
  double t = 0.0;
  int rho_id = -1;
  Matrix rho;
  Matrix direction;   // element a of the algebra with <a, G a> = min_eig ||a||^2
};

struct GEReport {
  std::string model;
  std::string mean;
  double k = 0.0;
  std::string mode;
  std::vector<GEPoint> points;
  double global_min = 0.0;
  bool pass = true;
  double tol = 1e-8;
  GEWitness witness;
  std::uint64_t seed = 0;
  double runtime_ms = 0.0;
};

using DensitySampler = std::function<DensitySample(int index)>;

/// Checks G >= -tol over t_grid x num_rho densities. Exact mode eigensolves
/// G; sampled mode takes the least Rayleigh quotient over random directions
/// followed by shifted power iteration, applying G matrix-free (so it can
/// only miss violations, never invent them). Deterministic given the seed,
/// independent of the thread count. Throws std::invalid_argument when exact
/// mode is requested above kExactCap.
[[nodiscard]] GEReport ge_check(const GradientSetup& setup, const OperatorMean& mean, double k,
                                const SamplerConfig& config, const std::string& model = "custom");
/// Same with a caller-provided density sampler.
[[nodiscard]] GEReport ge_check(const GradientSetup& setup, const OperatorMean& mean, double k,
                                const SamplerConfig& config, const DensitySampler& sampler,
                                const std::string& model);

struct OptimalK {
  enum class Status { finite, unbounded, infeasible };
  Status status = Status::finite;
  double k = 0.0;        // +inf when unbounded, -inf when infeasible
  double c_star = 0.0;   // largest generalized eigenvalue
  int rank = 0;
};

/// Largest K with G PSD at (t, rho), t > 0: K = -ln(c*)/(2t), c* the largest
/// eigenvalue of the pencil ((D P_t)^dagger M(rho) D P_t, D^dagger M(P_t rho) D)
/// on range(B). Unbounded when A vanishes there; infeasible when A does not
/// vanish on ker B. Throws std::invalid_argument for t <= 0.
[[nodiscard]] OptimalK optimal_k(const GradientSetup& setup, const OperatorMean& mean, double t,
                                 const DensityOperator& rho);

struct OptimalKConfig {
  std::vector<double> t_grid = default_t_grid();
  int restarts = 8;
  int max_sweeps = 60;
  double initial_step = 0.3;
  double min_step = 1e-6;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct OptimalKGlobal {
  double k_star = 0.0;
  double t_star = 0.0;
  Matrix rho_star;
  std::vector<double> per_t;   // min over the best density's restart, per grid t
  bool small_t_edge = false;   // infimum attained at the smallest grid t
  bool large_t_edge = false;
  int restarts = 0;
  long evaluations = 0;
  std::uint64_t seed = 0;
  double runtime_ms = 0.0;
};

/// inf over the t-grid and over densities rho = x x^dagger / tau(x x^dagger),
/// x in the test space, of optimal_k: restarts (trace state first, then
/// seeded random and near-singular starts) each refined by coordinate descent
/// on the real and imaginary parts of x.
[[nodiscard]] OptimalKGlobal optimal_k_global(const GradientSetup& setup, const OperatorMean& mean,
                                              const OptimalKConfig& config);

/// Generator L (x) id + id (x) L' on the tensor product, with jumps v (x) 1
/// and 1 (x) w. Single-block algebras only.
[[nodiscard]] LindbladGenerator tensor_generator(const LindbladGenerator& first, const LindbladGenerator& second);
/// L (x) id_m.
[[nodiscard]] LindbladGenerator ampliate(const LindbladGenerator& generator, int ancilla_dim);

/// GE check of generator (x) id_m with entangled and product samples mixed
/// in. Throws std::invalid_argument when exact mode is requested above the
/// cap, or when the setup carries a restriction.
[[nodiscard]] GEReport cge_check(const GradientSetup& setup, const OperatorMean& mean, double k, int ancilla_dim,
                                 const SamplerConfig& config, const std::string& model = "custom");

/// ge_check of the tensor product generator at constant K.
[[nodiscard]] GEReport tensor_ge_harness(const LindbladGenerator& first, const LindbladGenerator& second,
                                         const OperatorMean& mean, double k, const SamplerConfig& config,
                                         const std::string& model = "tensor");

/// Candidate t -> superoperator on H (components * gns square matrix).
using CandidateFamily = std::function<Matrix(double t)>;

/// e^{-rate t} (+)_j P_t.
[[nodiscard]] CandidateFamily direct_sum_candidate(const GradientSetup& setup, double rate);
/// e^{-rate t} id_H.
[[nodiscard]] CandidateFamily scalar_candidate(const GradientSetup& setup, double rate);

struct IntertwinePoint {
  double t = 0.0;
  int rho_id = 0;
  double left_margin = 0.0;
  double right_margin = 0.0;
};

struct IntertwineReport {
  bool pass = true;
  double k = 0.0;
  double max_intertwining_residual = 0.0;   // ||D P_t - V_t D||
  double min_left_margin = 0.0;             // e^{-2Kt} L(P_t rho) - V^dagger L(rho) V
  double min_right_margin = 0.0;            // same with right multiplication
  double max_j_residual = 0.0;              // ||J V J - V||
  bool j_commuting = false;
  std::vector<IntertwinePoint> points;
  std::string witness;
};

/// Conditions of the intertwining criterion on sampled (t, rho): (i) as a
/// superoperator identity within 1e-9 * (1 + ||D||), (ii) and (iii) as PSD
/// margins >= -tol. Times are `samples` log-spaced points in [1e-2, 5], each
/// paired with a density_sample.
[[nodiscard]] IntertwineReport intertwine_check(const GradientSetup& setup, const CandidateFamily& candidate,
                                                double k, int samples, std::uint64_t seed, double tol = 1e-8);

/// e^{-2Kt} P_t Gamma(a) - Gamma(P_t a). For the right-trivial mean,
/// <a, G a> = tau(this * rho), so GE(K) for that mean is the operator
/// inequality Gamma(P_t a) <= e^{-2Kt} P_t Gamma(a).
[[nodiscard]] Matrix bakry_emery_margin(const GradientSetup& setup, double t, double k, const Matrix& a);

}  // namespace ncgrad
