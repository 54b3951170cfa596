#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ncgrad/calculus.hpp"

namespace ncgrad {

enum class MeanKind { arithmetic, logarithmic, geometric, harmonic, left, right };

/// Kubo-Ando operator mean, represented by its scalar kernel m(s, t) on
/// [0, inf)^2 (m(s, t) = s f(t/s) with f the representing function).
///
/// Boundary values: logarithmic, geometric and harmonic kernels vanish when
/// either argument is 0; arithmetic is (s + t)/2; left is s; right is t.
class OperatorMean {
 public:
  explicit OperatorMean(MeanKind kind) : kind_(kind) {}

  /// One of arithmetic | logarithmic | geometric | harmonic | left | right.
  /// Throws std::invalid_argument otherwise.
  [[nodiscard]] static OperatorMean by_name(std::string_view name);
  [[nodiscard]] static std::vector<OperatorMean> builtins();

  [[nodiscard]] MeanKind kind() const { return kind_; }
  [[nodiscard]] std::string_view name() const;
  [[nodiscard]] bool symmetric() const { return kind_ != MeanKind::left && kind_ != MeanKind::right; }

  [[nodiscard]] double operator()(double s, double t) const;

  /// Matrix mean A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2} for positive definite A
  /// and positive semidefinite B.
  [[nodiscard]] Matrix kubo_ando(const Matrix& a, const Matrix& b) const;

  bool operator==(const OperatorMean&) const = default;

 private:
  MeanKind kind_;
};

/// rho_hat = Lambda(L(rho), R(rho)) for one density. L(rho) and R(rho)
/// commute, so in the eigenbasis of rho the operator is the entrywise
/// multiplier (rho_hat xi)~_{kl} = m(lambda_k, lambda_l) xi~_{kl}, applied
/// to each component of a tangent vector.
class RhoHat {
 public:
  /// Throws NumericalError if rho has an eigenvalue below -1e-10; eigenvalues
  /// in [-1e-10, 0) are treated as 0.
  RhoHat(const OperatorMean& mean, const TracialAlgebra& algebra, const Matrix& rho);

  [[nodiscard]] Matrix apply(const Matrix& xi) const;
  [[nodiscard]] TangentVector apply(const TangentVector& xi) const;
  /// Hermitian PSD gns x gns multiplier matrix of one component.
  [[nodiscard]] Matrix block_matrix() const;
  [[nodiscard]] double quadratic_form(const TangentVector& xi) const;

 private:
  TracialAlgebra algebra_;
  std::vector<Matrix> eigenvectors_;
  std::vector<Eigen::MatrixXd> multipliers_;
};

[[nodiscard]] TangentVector rho_hat_apply(const OperatorMean& mean, const TracialAlgebra& algebra,
                                          const DensityOperator& rho, const TangentVector& xi);
/// Block-diagonal (components copies of RhoHat::block_matrix) superoperator on H.
[[nodiscard]] Matrix rho_hat_matrix(const OperatorMean& mean, const TracialAlgebra& algebra,
                                    const DensityOperator& rho, int components);
/// <xi, rho_hat xi>_H; values in [-1e-10, 0) are clamped to 0, anything more
/// negative throws NumericalError.
[[nodiscard]] double metric_norm_sq(const OperatorMean& mean, const TracialAlgebra& algebra,
                                    const DensityOperator& rho, const TangentVector& xi);

struct MeanAuditReport {
  std::string mean;
  bool passed = true;
  double monotonicity_margin = 0.0;   // min eigenvalue of Lambda(C,D) - Lambda(A,B)
  double transformer_margin = 0.0;    // min eigenvalue of Lambda(CAC,CBC) - C Lambda(A,B) C
  double normalization_error = 0.0;   // ||Lambda(1,1) - 1||
  bool symmetric_on_grid = false;
  bool symmetry_flag_consistent = true;
  bool scalar_monotone = true;
  std::string witness;
};

/// Sampled matrix-level checks of monotonicity, the transformer inequality
/// and normalization, plus scalar-grid symmetry and monotonicity. Margins are
/// relative to 1 + the norm of the larger side; the audit passes when every
/// margin is >= -1e-9.
[[nodiscard]] MeanAuditReport mean_axiom_audit(const OperatorMean& mean, int samples, std::uint64_t seed);

}  // namespace ncgrad
