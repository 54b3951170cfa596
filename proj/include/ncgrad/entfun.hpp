#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ncgrad/gradest.hpp"

namespace ncgrad {

/// Ent(rho) = tau(rho log rho), with 0 log 0 = 0.
[[nodiscard]] double entropy(const TracialAlgebra& algebra, const DensityOperator& rho);

/// tau(rho log rho) - tau(rho log sigma); +inf when supp rho is not inside
/// supp sigma (eigenvalues of sigma below 1e-12 span its kernel).
[[nodiscard]] double relative_entropy(const TracialAlgebra& algebra, const DensityOperator& rho,
                                      const DensityOperator& sigma);

struct EntropyFixPaths {
  double relative = 0.0;     // Ent(rho || E(rho))
  double difference = 0.0;   // Ent(rho) - Ent(E(rho))
};

/// Both evaluations of the entropy relative to the fixed-point algebra `fix`.
[[nodiscard]] EntropyFixPaths entropy_fix_paths(const Subalgebra& fix, const DensityOperator& rho);
/// Ent(rho || E_fix(rho)). Throws NumericalError when the two paths disagree
/// by more than 1e-9 (1 + |value|).
[[nodiscard]] double entropy_fix(const Subalgebra& fix, const DensityOperator& rho);
[[nodiscard]] double entropy_fix(const LindbladGenerator& generator, const DensityOperator& rho);

struct FisherInformation {
  double value = 0.0;          // +inf when the smoothed values diverge
  bool finite = true;
  bool smoothed = false;       // rho was not of full support
  double cross_check = 0.0;    // |tau((L rho) log rho) - sum_j <d_j rho, d_j log rho>| on the full-support path
  std::vector<double> epsilons;
  std::vector<double> smoothed_values;
};

/// I(rho) = tau((L rho) log rho). Full support (min eigenvalue > 1e-12): the
/// value is cross-checked against sum_j <d_j rho, d_j log rho> and a
/// disagreement beyond 1e-8 (1 + |I|) throws NumericalError. Otherwise I is
/// evaluated at (1 - eps) rho + eps 1 for eps = 1e-4, 1e-5, 1e-6 and
/// Richardson-extrapolated to eps = 0; successive differences that fail to
/// shrink flag divergence.
[[nodiscard]] FisherInformation fisher_information(const LindbladGenerator& generator, const DensityOperator& rho);

struct FisherDecayPoint {
  double t = 0.0;
  int rho_id = 0;
  double fisher_evolved = 0.0;   // I(P_t rho)
  double bound = 0.0;            // e^{-2Kt} I(rho)
  double margin = 0.0;
};

struct FisherDecayReport {
  double k = 0.0;
  std::vector<FisherDecayPoint> points;
  double min_margin = 0.0;
  bool pass = true;
  double fitted_exponent = 0.0;   // rate r of the through-origin fit ln(I(P_t rho)/I(rho)) ~ -r t
};

/// Margins e^{-2Kt} I(rho) - I(P_t rho) on every (t, rho); pass when all are
/// >= -tol. Densities must have full support.
[[nodiscard]] FisherDecayReport fisher_decay_check(const LindbladGenerator& generator, double k,
                                                   const std::vector<DensityOperator>& densities,
                                                   const std::vector<double>& t_grid, double tol = 1e-8);

struct MlsiConfig {
  int samples = 200;
  int descents = 3;       // local refinements started from the best samples
  int max_sweeps = 30;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct MlsiEstimate {
  double estimate = 0.0;   // sampled infimum of I / Ent_fix: an upper bound on the MLSI constant
  Matrix argmin;
  int valid_samples = 0;
  long evaluations = 0;
};

/// inf I(rho) / Ent_fix(rho) over full-support samples with Ent_fix > 1e-10,
/// refined by coordinate descent on x for rho = x x^dagger / tau. Throws
/// NumericalError when no sample is valid (every sample is a fixed point).
[[nodiscard]] MlsiEstimate mlsi_estimate(const GradientSetup& setup, const MlsiConfig& config);

struct TrajectoryRow {
  double t = 0.0;
  double entropy = 0.0;
  double fisher = 0.0;
};

/// (t, Ent(P_t rho), I(P_t rho)) on the grid.
[[nodiscard]] std::vector<TrajectoryRow> entropy_trajectory(const GradientSetup& setup, const DensityOperator& rho,
                                                            const std::vector<double>& t_grid);
/// Header "t,entropy,fisher" then one row per point, full precision.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows);

}  // namespace ncgrad
