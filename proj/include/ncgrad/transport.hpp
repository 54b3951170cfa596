#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ncgrad/gradest.hpp"

namespace ncgrad {

/// Endpoints whose fixed-point expectations differ cannot be joined by an
/// admissible curve.
class NotConnectableError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Minimal-norm self-adjoint phi with A phi = (rho_b - rho_a) / dt, where
/// A = D^dagger M(rho_m) D at the midpoint rho_m. With a restriction, phi and
/// the equation live in the subalgebra. Throws NotConnectableError when the
/// right side is not in range(A) (relative residual above 1e-9).
[[nodiscard]] Matrix continuity_solve(const GradientSetup& setup, const OperatorMean& mean,
                                      const DensityOperator& rho_a, const DensityOperator& rho_b, double dt);

/// Densities rho_0..rho_N on the uniform grid dt = 1/N and the midpoint
/// potentials phi_0..phi_{N-1}.
struct TransportPath {
  std::string mean;
  std::vector<Matrix> densities;
  std::vector<Matrix> potentials;
};

struct PathAction {
  double length = 0.0;   // sum_k int_0^1 <delta_k, A(rho_k + u delta_k)^+ delta_k>^{1/2} du
  double energy = 0.0;   // N sum_k int_0^1 <delta_k, A(...)^+ delta_k> du
};

/// Action of the piecewise-linear curve through the densities: each segment
/// is integrated with adaptive 8-point Gauss-Legendre quadrature, so `length` is the
/// length of an admissible curve. Throws NotConnectableError for
/// non-connectable neighbours and NumericalError if length^2 > energy.
[[nodiscard]] PathAction action(const GradientSetup& setup, const OperatorMean& mean,
                                const std::vector<Matrix>& densities);

struct TransportResult {
  double bound = 0.0;    // best path length seen: discretized upper bound on W
  double energy = 0.0;
  TransportPath path;
  std::vector<double> energy_trace;   // energy after every sweep (non-increasing)
  std::vector<double> length_trace;
  int levels = 1;
};

/// Upper bound on W(rho0, rho1) from N-segment piecewise-linear paths. The
/// coarsest level starts from linear interpolation; for even N >= 4 the path
/// is initialized from the optimized N/2 solution with midpoints inserted, so
/// refining N -> 2N cannot increase the bound beyond quadrature error.
/// Interior densities move along self-adjoint directions orthogonal to the
/// fixed-point algebra (keeping every point connectable); steps leaving the
/// positive cone are rejected. `iters` caps the sweeps per level; `seed`
/// fixes the coordinate order.
[[nodiscard]] TransportResult w_upper_bound(const GradientSetup& setup, const OperatorMean& mean,
                                            const DensityOperator& rho0, const DensityOperator& rho1, int segments,
                                            int iters, std::uint64_t seed);

}  // namespace ncgrad
