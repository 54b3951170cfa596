#pragma once

#include <vector>

#include "ncgrad/qms.hpp"

namespace ncgrad {

/// Element of the tangent module H = L^2(M)^{(+) n}: one algebra element per
/// derivation.
using TangentVector = std::vector<Matrix>;

/// First-order calculus of a Lindblad generator: the derivations
/// d_j x = sqrt(c_j) [v_j, x] into the direct sum H = (+)_j L^2(M, tau) with
/// componentwise left/right multiplication and J(xi) = (xi_j^dagger)_j.
///
/// In finite dimension every operator mean is regular and the calculus is
/// Gamma-regular, so neither property is checked at runtime. The module is
/// the full direct sum, not the minimal submodule generated by d(M); norms of
/// d-images are the same in both.
class TangentModule {
 public:
  explicit TangentModule(const LindbladGenerator& generator);

  [[nodiscard]] const TracialAlgebra& algebra() const { return algebra_; }
  [[nodiscard]] int components() const { return static_cast<int>(scaled_jumps_.size()); }

  /// Throws std::out_of_range for a bad component index.
  [[nodiscard]] Matrix partial(int j, const Matrix& x) const;
  [[nodiscard]] TangentVector derivative(const Matrix& x) const;

  /// GNS matrix of d_j, and the stacked (n * gns) x gns matrix of d.
  [[nodiscard]] const Matrix& derivation_superop(int j) const { return derivations_.at(static_cast<std::size_t>(j)); }
  [[nodiscard]] Matrix stacked() const;

  /// Gamma(x, y) = sum_j (d_j x)^dagger (d_j y).
  [[nodiscard]] Matrix gamma(const Matrix& x, const Matrix& y) const;
  /// sum_j xi_j^dagger xi_j.
  [[nodiscard]] Matrix gamma_vec(const TangentVector& xi) const;

  [[nodiscard]] Complex inner(const TangentVector& xi, const TangentVector& eta) const;
  [[nodiscard]] TangentVector left(const Matrix& a, const TangentVector& xi) const;
  [[nodiscard]] TangentVector right(const TangentVector& xi, const Matrix& a) const;
  /// Per-component superoperators of L(a) and R(a) (the same block for every
  /// component).
  [[nodiscard]] Matrix left_superop(const Matrix& a) const { return algebra_.left_multiplication(a); }
  [[nodiscard]] Matrix right_superop(const Matrix& a) const { return algebra_.right_multiplication(a); }
  [[nodiscard]] TangentVector involution(const TangentVector& xi) const;

  [[nodiscard]] TangentVector to_tangent(const Vector& stacked_gns) const;
  [[nodiscard]] Vector to_stacked_gns(const TangentVector& xi) const;

 private:
  TracialAlgebra algebra_;
  std::vector<Matrix> scaled_jumps_;   // sqrt(c_j) v_j
  std::vector<Matrix> derivations_;
};

}  // namespace ncgrad
