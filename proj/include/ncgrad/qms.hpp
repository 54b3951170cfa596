#pragma once

#include <span>
#include <string>
#include <vector>

#include "ncgrad/algebra.hpp"

namespace ncgrad {

/// One term c (v^2 x + x v^2 - 2 v x v) of a Lindblad generator.
struct Jump {
  double weight = 1.0;
  Matrix v;
};

/// Tracially symmetric Lindblad generator
///   L x = sum_j c_j (v_j^2 x + x v_j^2 - 2 v_j x v_j),   c_j > 0, v_j = v_j^dagger,
/// with semigroup P_t = exp(-t L). The GNS superoperator is computed once at
/// construction and cached.
class LindbladGenerator {
 public:
  /// Throws NumericalError if a jump is not a Hermitian element of the
  /// algebra or has a non-positive weight.
  LindbladGenerator(TracialAlgebra algebra, std::vector<Jump> jumps);

  [[nodiscard]] const TracialAlgebra& algebra() const { return algebra_; }
  [[nodiscard]] const std::vector<Jump>& jumps() const { return jumps_; }
  [[nodiscard]] const Matrix& superop() const { return superop_; }

  [[nodiscard]] Matrix apply(const Matrix& x) const;

 private:
  TracialAlgebra algebra_;
  std::vector<Jump> jumps_;
  Matrix superop_;
};

/// P_t = U exp(-t Lambda) U^dagger from the eigendecomposition of the
/// (GNS-self-adjoint) generator; one decomposition serves every t.
class Semigroup {
 public:
  explicit Semigroup(const LindbladGenerator& generator);

  [[nodiscard]] const TracialAlgebra& algebra() const { return algebra_; }
  [[nodiscard]] const SpectralDecomposition& spectrum() const { return spectrum_; }

  /// Throws std::invalid_argument for t < 0.
  [[nodiscard]] Matrix superop(double t) const;
  [[nodiscard]] Matrix apply(double t, const Matrix& x) const;
  [[nodiscard]] DensityOperator apply(double t, const DensityOperator& rho) const;

 private:
  TracialAlgebra algebra_;
  SpectralDecomposition spectrum_;
};

struct QmsCheck {
  std::string property;
  bool passed = true;
  double residual = 0.0;
  std::string witness;
};

struct QmsReport {
  bool passed = true;
  std::vector<QmsCheck> checks;
};

/// Unitality, tau-symmetry, spectrum in [0, inf) and complete positivity of
/// P_t (Choi matrix normalized by its trace must have min eigenvalue >=
/// -1e-9) for each sampled t. The Choi test is skipped (and reported failed)
/// when the GNS dimension exceeds choi_cap.
[[nodiscard]] QmsReport verify_qms(const LindbladGenerator& generator, std::span<const double> t_samples,
                                   int choi_cap = 4096);

struct FixedPointAlgebra {
  Subalgebra algebra;
  double spectral_gap = 0.0;   // smallest nonzero eigenvalue of L; +inf if L = 0
};

/// ker L (eigenvalues below 1e-9 in magnitude). Throws NumericalError if the
/// eigenspace is not a *-subalgebra within tolerance.
[[nodiscard]] FixedPointAlgebra fixed_point_algebra(const LindbladGenerator& generator);

}  // namespace ncgrad
