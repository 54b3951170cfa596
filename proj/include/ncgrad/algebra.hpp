#pragma once

#include <vector>

#include "ncgrad/linalg.hpp"
#include "ncgrad/random.hpp"

namespace ncgrad {

/// Finite-dimensional tracial algebra (M, tau): a direct sum of full matrix
/// blocks M_{d_1} + ... + M_{d_k} with tau = sum_i w_i tr_{d_i}, where tr is
/// the normalized trace of a block and the weights sum to 1.
///
/// Elements are stored as block-diagonal dim() x dim() matrices. GNS
/// coordinates are the in-block entries, column-stacked block by block and
/// scaled by sqrt(w_i / d_i), so that <x, y>_2 = tau(x^dagger y) is the plain
/// Euclidean inner product of coordinate vectors. Every superoperator in this
/// library is a gns_dim() x gns_dim() matrix in these coordinates, which makes
/// GNS-adjoints ordinary conjugate transposes.
class TracialAlgebra {
 public:
  TracialAlgebra(std::vector<int> block_dims, std::vector<double> block_weights);

  /// M_n with the normalized trace.
  [[nodiscard]] static TracialAlgebra full(int n);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int gns_dim() const { return gns_dim_; }
  [[nodiscard]] const std::vector<int>& block_dims() const { return block_dims_; }
  [[nodiscard]] const std::vector<double>& block_weights() const { return block_weights_; }
  [[nodiscard]] std::size_t num_blocks() const { return block_dims_.size(); }
  [[nodiscard]] bool is_single_block() const { return block_dims_.size() == 1; }

  [[nodiscard]] Matrix identity() const;
  [[nodiscard]] Matrix zero() const;
  [[nodiscard]] Matrix block(const Matrix& x, std::size_t i) const;
  [[nodiscard]] Matrix assemble(const std::vector<Matrix>& blocks) const;

  /// Correct size and vanishing off-block entries (within tol * (1 + max|x|)).
  [[nodiscard]] bool contains(const Matrix& x, double tol = 1e-12) const;
  /// Zeroes the off-block entries.
  [[nodiscard]] Matrix pinch(const Matrix& x) const;

  [[nodiscard]] Complex trace(const Matrix& x) const;
  [[nodiscard]] Complex gns_inner(const Matrix& x, const Matrix& y) const;
  [[nodiscard]] double gns_norm(const Matrix& x) const;

  [[nodiscard]] Vector to_gns(const Matrix& x) const;
  [[nodiscard]] Matrix from_gns(const Vector& v) const;
  [[nodiscard]] Matrix gns_basis_element(int k) const;

  /// Matrix of a linear map of the algebra in GNS coordinates.
  [[nodiscard]] Matrix superop(const MatrixMap& action) const;
  /// Superoperators of x -> a x and x -> x a.
  [[nodiscard]] Matrix left_multiplication(const Matrix& a) const;
  [[nodiscard]] Matrix right_multiplication(const Matrix& a) const;
  /// Real permutation T with to_gns(x^T) = T to_gns(x); hence
  /// to_gns(x^dagger) = T conj(to_gns(x)).
  [[nodiscard]] Matrix transpose_permutation() const;

  /// Spectral data of a Hermitian element, one decomposition per block.
  [[nodiscard]] std::vector<SpectralDecomposition> block_eig(const Matrix& x) const;
  /// f applied blockwise through the spectral calculus.
  [[nodiscard]] Matrix apply_function(const Matrix& x, const std::function<double(double)>& f) const;
  [[nodiscard]] double min_eigenvalue(const Matrix& x) const;

  bool operator==(const TracialAlgebra& other) const = default;

 private:
  std::vector<int> block_dims_;
  std::vector<double> block_weights_;
  std::vector<int> offsets_;
  std::vector<int> gns_offsets_;
  std::vector<double> scales_;
  int dim_ = 0;
  int gns_dim_ = 0;
};

/// M_1 (x) M_2 for single-block algebras; tau_12(x (x) y) = tau_1(x) tau_2(y)
/// with x (x) y realized as kron(x, y).
[[nodiscard]] TracialAlgebra tensor(const TracialAlgebra& a, const TracialAlgebra& b);

/// Unital *-subalgebra N of a tracial algebra, stored through a GNS-orthonormal
/// basis (columns of basis()).
class Subalgebra {
 public:
  /// Smallest unital *-subalgebra containing the generators: iterated
  /// products plus orthonormalization until the dimension stabilizes.
  [[nodiscard]] static Subalgebra generated_by(const TracialAlgebra& algebra,
                                               const std::vector<Matrix>& generators,
                                               double tol = 1e-10);
  /// Validates an explicit orthonormal GNS basis: contains 1, closed under
  /// adjoint and (on sampled pairs) under products. Throws NumericalError.
  [[nodiscard]] static Subalgebra from_gns_basis(const TracialAlgebra& algebra, Matrix basis,
                                                 double tol = 1e-10);
  [[nodiscard]] static Subalgebra scalars(const TracialAlgebra& algebra);
  [[nodiscard]] static Subalgebra whole(const TracialAlgebra& algebra);

  [[nodiscard]] const TracialAlgebra& algebra() const { return algebra_; }
  [[nodiscard]] const Matrix& basis() const { return basis_; }
  [[nodiscard]] int dim() const { return static_cast<int>(basis_.cols()); }

  /// GNS-orthogonal projection onto N, which is the trace-preserving
  /// conditional expectation E: M -> N.
  [[nodiscard]] Matrix projector() const { return basis_ * basis_.adjoint(); }
  [[nodiscard]] Matrix expectation(const Matrix& x) const;
  [[nodiscard]] bool contains(const Matrix& x, double tol = 1e-10) const;

 private:
  Subalgebra(TracialAlgebra algebra, Matrix basis);

  TracialAlgebra algebra_;
  Matrix basis_;
};

/// Positive tau-normalized element of the algebra.
class DensityOperator {
 public:
  /// Validates: element of the algebra, Hermitian, min eigenvalue >= -tol,
  /// tau(rho) = 1 within tol. Throws NumericalError.
  [[nodiscard]] static DensityOperator from_matrix(const TracialAlgebra& algebra, const Matrix& rho,
                                                   double tol = 1e-12);
  /// psd / tau(psd) after validation of positivity.
  [[nodiscard]] static DensityOperator normalized(const TracialAlgebra& algebra, const Matrix& psd);
  [[nodiscard]] static DensityOperator trace_state(const TracialAlgebra& algebra);

  [[nodiscard]] const Matrix& matrix() const { return rho_; }

 private:
  explicit DensityOperator(Matrix rho) : rho_(std::move(rho)) {}
  Matrix rho_;
};

/// rho = G G^dagger / tau(G G^dagger), G complex Gaussian with `rank`
/// columns per block (full rank when rank <= 0).
[[nodiscard]] DensityOperator wishart_density(const TracialAlgebra& algebra, Rng& rng, int rank = 0);
/// Rank-deficient Wishart sample mixed with the trace state:
/// (1 - smoothing) rho_low + smoothing 1.
[[nodiscard]] DensityOperator near_singular_density(const TracialAlgebra& algebra, Rng& rng,
                                                    double smoothing = 1e-6);
/// rho = E_N(G G^dagger) normalized: a generic density of the subalgebra.
[[nodiscard]] DensityOperator subalgebra_density(const Subalgebra& sub, const Matrix& g);

}  // namespace ncgrad
