#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ncgrad {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised when an iterative kernel fails or a numerical precondition is
/// violated beyond tolerance (non-Hermitian input, rank ambiguity, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a scalar function is applied outside of its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Eigen-decomposition A = U diag(lambda) U^dagger of a Hermitian matrix.
/// Eigenvalues are ascending; columns of U are orthonormal.
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;

  [[nodiscard]] Matrix reconstruct() const;
  [[nodiscard]] Index dim() const { return eigenvalues.size(); }
};

[[nodiscard]] double frobenius_norm(const Matrix& a);
[[nodiscard]] Matrix hermitian_part(const Matrix& a);
[[nodiscard]] Matrix commutator(const Matrix& a, const Matrix& b);

/// Hermitian within rel_tol * (1 + max |entry|).
[[nodiscard]] bool is_hermitian(const Matrix& a, double rel_tol = 1e-12);

/// Symmetrizes (A + A^dagger)/2 before solving. Throws NumericalError when
/// the solver does not converge or the reconstruction residual exceeds
/// 1e-10 (1 + ||A||_F).
[[nodiscard]] SpectralDecomposition eig_hermitian(const Matrix& a);

/// U diag(f(lambda)) U^dagger. f may throw DomainError or return NaN for
/// points outside its domain; both are reported as DomainError naming the
/// offending eigenvalue.
[[nodiscard]] Matrix matrix_function(const Matrix& a, const std::function<double(double)>& f);
[[nodiscard]] Matrix matrix_function(const SpectralDecomposition& spec,
                                     const std::function<double(double)>& f);

struct PsdResult {
  bool psd = false;
  double min_eigenvalue = 0.0;
};

/// psd iff min eigenvalue >= -tol * (1 + ||A||_2).
[[nodiscard]] PsdResult psd_check(const Matrix& a, double tol);

// Column-stacking vectorization: entry (i, j) of a dim x dim matrix lands at
// index i + j * dim. Superoperator matrices exchanged between modules and
// written to disk all use this order.
[[nodiscard]] Vector vectorize(const Matrix& a);
[[nodiscard]] Matrix devectorize(const Vector& v, Index dim);

[[nodiscard]] Matrix kron(const Matrix& a, const Matrix& b);

using MatrixMap = std::function<Matrix(const Matrix&)>;

/// dim^2 x dim^2 matrix of a linear map on dim x dim matrices; column k is
/// vectorize(action(E_k)) for the k-th column-stacked matrix unit. Linearity
/// is checked on a few seeded random pairs; failure throws NumericalError.
[[nodiscard]] Matrix superop_matrix(const MatrixMap& action, Index dim);

/// Largest generalized eigenvalue of the Hermitian PSD pencil (A, B) on
/// range(B), i.e. sup_x <x,Ax>/<x,Bx> over x not in ker B.
struct PencilResult {
  enum class Status {
    finite,      // value holds the supremum
    zero,        // A vanishes on range(B); supremum is 0
    unbounded,   // A does not vanish on ker B
  };
  Status status = Status::finite;
  double value = 0.0;
  int rank = 0;
  double kernel_leak = 0.0;   // ||A|| restricted to/against ker B
  RealVector b_spectrum;
  Vector maximizer;           // argmax direction in the ambient space
};

/// rank_tol: eigenvalues of B below rank_tol * ||B|| define ker B. Throws
/// NumericalError when the rank decision is ambiguous (an eigenvalue of B sits
/// within a factor 10 of the cutoff and A couples to it).
[[nodiscard]] PencilResult largest_generalized_eigenvalue(const Matrix& a, const Matrix& b,
                                                          double rank_tol = 1e-10);

}  // namespace ncgrad
