#include "ncgrad/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ncgrad::reference {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const auto idx = static_cast<std::size_t>(i);
    rule.nodes[idx] = 0.5 * (1.0 - x);
    rule.weights[idx] = 1.0 / ((1.0 - x * x) * dp * dp);   // 2 / (...) on [-1, 1], halved
  }
  return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b, int n, int panels) {
  const GaussRule rule = gauss_legendre(n);
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(lo + h * rule.nodes[i]);
  }
  return sum * h;
}

Eigen::MatrixXcd log_mean_quadrature(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& xi, int n) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  if (lambda.minCoeff() <= 0.0) throw std::invalid_argument("log_mean_quadrature: rho must be positive definite");
  const Eigen::MatrixXcd& u = eig.eigenvectors();
  auto power = [&](double s) {
    Eigen::VectorXcd d(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) d(k) = std::pow(lambda(k), s);
    return Eigen::MatrixXcd(u * d.asDiagonal() * u.adjoint());
  };
  const GaussRule rule = gauss_legendre(n);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(xi.rows(), xi.cols());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = rule.nodes[i];
    sum += rule.weights[i] * power(s) * xi * power(1.0 - s);
  }
  return sum;
}

double arithmetic_mean(double s, double t) { return 0.5 * (s + t); }

double logarithmic_mean(double s, double t) {
  if (s <= 0.0 || t <= 0.0) return 0.0;
  if (s == t) return s;
  return (s - t) / (std::log(s) - std::log(t));
}

double two_point_optimal_k(double p, const std::function<double(double, double)>& mean,
                           const std::vector<double>& t_grid, int points) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("two_point_optimal_k: p must lie in (0, 1)");
  double best = std::numeric_limits<double>::infinity();
  const double top = 1.0 / p;
  for (int i = 1; i < points; ++i) {
    const double a = top * i / points;
    const double b = (1.0 - p * a) / (1.0 - p);
    const double m0 = mean(a, b);
    if (!(m0 > 0.0)) continue;
    for (double t : t_grid) {
      const double decay = std::exp(-t);
      const double mt = mean(decay * a + 1.0 - decay, decay * b + 1.0 - decay);
      best = std::min(best, 1.0 + std::log(mt / m0) / (2.0 * t));
    }
  }
  return best;
}

double two_point_distance(double s0, double s1, const std::function<double(double, double)>& mean) {
  if (std::abs(s0) >= 1.0 || std::abs(s1) >= 1.0) {
    throw std::invalid_argument("two_point_distance: endpoints must have full support");
  }
  return std::abs(integrate([&](double s) { return 1.0 / std::sqrt(mean(1.0 + s, 1.0 - s)); }, s0, s1));
}

}  // namespace ncgrad::reference
