#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

// Independent evaluations used to check the library. Only Eigen is used
// here; nothing calls back into ncgrad.
namespace ncgrad::reference {

struct GaussRule {
  std::vector<double> nodes;     // on [0, 1]
  std::vector<double> weights;   // sum to 1
};

/// n-point Gauss-Legendre rule from Newton iteration on P_n.
[[nodiscard]] GaussRule gauss_legendre(int n);

/// int_a^b f by `panels` composite n-point Gauss-Legendre panels.
[[nodiscard]] double integrate(const std::function<double(double)>& f, double a, double b, int n = 64,
                               int panels = 16);

/// int_0^1 rho^s xi rho^{1-s} ds for positive definite Hermitian rho.
[[nodiscard]] Eigen::MatrixXcd log_mean_quadrature(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& xi,
                                                   int n = 64);

/// Scalar means written out directly.
[[nodiscard]] double arithmetic_mean(double s, double t);
[[nodiscard]] double logarithmic_mean(double s, double t);

/// Two-point chain with stationary weights (p, 1 - p) relaxing to the
/// stationary law at rate 1; densities (a, b) with p a + (1 - p) b = 1.
/// Gradient estimate on this chain reduces to the scalar inequality
///   e^{-2t} m(a, b) <= e^{-2Kt} m(P_t a, P_t b),   P_t a = e^{-t} a + 1 - e^{-t},
/// so its optimal constant over the grids is
///   min_{t, a} 1 + ln(m(P_t a, P_t b) / m(a, b)) / (2t),
/// with a on `points` uniform values in (0, 1/p).
[[nodiscard]] double two_point_optimal_k(double p, const std::function<double(double, double)>& mean,
                                         const std::vector<double>& t_grid, int points = 20001);

/// Distance between (1 + s0, 1 - s0) and (1 + s1, 1 - s1) on the uniform
/// two-point space: the metric is ds^2 / m(1 + s, 1 - s), so the geodesic
/// is monotone in s and its length is a one-dimensional integral.
[[nodiscard]] double two_point_distance(double s0, double s1, const std::function<double(double, double)>& mean);

}  // namespace ncgrad::reference
