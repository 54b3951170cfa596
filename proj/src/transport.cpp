#include "ncgrad/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ncgrad {

namespace {

struct Quadrature {
  std::vector<double> nodes;     // on [0, 1]
  std::vector<double> weights;   // sum to 1
};

// Golub-Welsch on the Legendre Jacobi matrix.
const Quadrature& gauss_legendre8() {
  static const Quadrature rule = [] {
    constexpr int n = 8;
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
      const double beta = k / std::sqrt(4.0 * k * k - 1.0);
      jacobi(k, k - 1) = beta;
      jacobi(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    Quadrature q;
    for (int i = 0; i < n; ++i) {
      const double v0 = solver.eigenvectors()(0, i);
      q.nodes.push_back(0.5 * (solver.eigenvalues()(i) + 1.0));
      q.weights.push_back(v0 * v0);
    }
    return q;
  }();
  return rule;
}

// <delta, A(rho)^+ delta> in the test space and the minimal-norm solution.
struct PseudoSolve {
  double quadratic = 0.0;
  Vector solution;   // test-space coordinates
};

PseudoSolve pseudo_solve(const GradientSetup& setup, const OperatorMean& mean, const Matrix& rho, const Matrix& rhs) {
  const Matrix& basis = setup.basis();
  const Matrix a = hermitian_part(basis.adjoint() * weighted_dirichlet(setup, mean, rho) * basis);
  const Vector d = basis.adjoint() * setup.algebra().to_gns(rhs);
  const auto spec = eig_hermitian(a);
  const double top = std::max(spec.eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
  const Vector coeffs = spec.eigenvectors.adjoint() * d;
  Vector scaled = Vector::Zero(coeffs.size());
  double leak = 0.0;
  for (Index k = 0; k < coeffs.size(); ++k) {
    if (spec.eigenvalues(k) > 1e-10 * top) {
      scaled(k) = coeffs(k) / spec.eigenvalues(k);
    } else {
      leak += std::norm(coeffs(k));
    }
  }
  leak = std::sqrt(leak);
  if (leak > 1e-9 * (1.0 + d.norm())) {
    std::ostringstream msg;
    msg << "not connectable: continuity equation has no solution (residual " << leak << ")";
    throw NotConnectableError(msg.str());
  }
  PseudoSolve out;
  out.solution = spec.eigenvectors * scaled;
  out.quadratic = std::max(0.0, d.dot(out.solution).real());
  return out;
}

struct SegmentCost {
  double length = 0.0;   // int sqrt(q)
  double energy = 0.0;   // int q
};

// Integrals over u in [lo, hi] of the full segment a -> b, so that the
// integrand sees the whole displacement b - a.
SegmentCost gauss_piece(const GradientSetup& setup, const OperatorMean& mean, const Matrix& a, const Matrix& delta,
                        double lo, double hi) {
  SegmentCost cost;
  const auto& rule = gauss_legendre8();
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const Matrix rho = a + (lo + (hi - lo) * rule.nodes[i]) * delta;
    const double q = pseudo_solve(setup, mean, rho, delta).quadratic;
    cost.length += rule.weights[i] * std::sqrt(q);
    cost.energy += rule.weights[i] * q;
  }
  cost.length *= hi - lo;
  cost.energy *= hi - lo;
  return cost;
}

// Adaptive bisection until the two-half estimate agrees with the whole one;
// near the boundary of the positive cone the integrand is steep and a fixed
// rule would let the optimizer exploit the quadrature error.
SegmentCost adaptive_piece(const GradientSetup& setup, const OperatorMean& mean, const Matrix& a,
                           const Matrix& delta, double lo, double hi, const SegmentCost& whole, int depth) {
  const double mid = 0.5 * (lo + hi);
  const SegmentCost left = gauss_piece(setup, mean, a, delta, lo, mid);
  const SegmentCost right = gauss_piece(setup, mean, a, delta, mid, hi);
  SegmentCost halves{left.length + right.length, left.energy + right.energy};
  const bool converged = std::abs(halves.length - whole.length) <= 1e-12 * (1.0 + halves.length) &&
                         std::abs(halves.energy - whole.energy) <= 1e-12 * (1.0 + halves.energy);
  if (converged || depth >= 20) return halves;
  const SegmentCost l = adaptive_piece(setup, mean, a, delta, lo, mid, left, depth + 1);
  const SegmentCost r = adaptive_piece(setup, mean, a, delta, mid, hi, right, depth + 1);
  return {l.length + r.length, l.energy + r.energy};
}

SegmentCost segment_cost(const GradientSetup& setup, const OperatorMean& mean, const Matrix& a, const Matrix& b) {
  const Matrix delta = b - a;
  if (setup.algebra().gns_norm(delta) == 0.0) return {};
  const SegmentCost whole = gauss_piece(setup, mean, a, delta, 0.0, 1.0);
  return adaptive_piece(setup, mean, a, delta, 0.0, 1.0, whole, 0);
}

void check_connectable(const Subalgebra& fix, const Matrix& rho0, const Matrix& rho1) {
  const auto& algebra = fix.algebra();
  const double gap = algebra.gns_norm(fix.expectation(rho0 - rho1));
  if (gap > 1e-9) {
    std::ostringstream msg;
    msg << "not connectable: fixed-point expectations differ by " << gap;
    throw NotConnectableError(msg.str());
  }
}

// Orthonormal (for Re tau(x y)) self-adjoint directions in the test space
// with vanishing fixed-point expectation.
std::vector<Matrix> perturbation_basis(const GradientSetup& setup, const Subalgebra& fix) {
  const auto& algebra = setup.algebra();
  std::vector<Matrix> out;
  auto add = [&](Matrix h) {
    h = hermitian_part(h - fix.expectation(h));
    for (const auto& g : out) h -= algebra.trace(g * h).real() * g;
    const double norm = std::sqrt(std::max(0.0, algebra.trace(h * h).real()));
    if (norm > 1e-8) out.push_back(h / norm);
  };
  for (Index c = 0; c < setup.basis().cols(); ++c) {
    const Matrix x = algebra.from_gns(setup.basis().col(c));
    add(0.5 * (x + x.adjoint()));
    add(Complex(0.0, -0.5) * (x - x.adjoint()));
  }
  return out;
}

}  // namespace

Matrix continuity_solve(const GradientSetup& setup, const OperatorMean& mean, const DensityOperator& rho_a,
                        const DensityOperator& rho_b, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("continuity_solve: dt must be positive");
  const Matrix mid = 0.5 * (rho_a.matrix() + rho_b.matrix());
  const Matrix rhs = (rho_b.matrix() - rho_a.matrix()) / dt;
  const auto solved = pseudo_solve(setup, mean, mid, rhs);
  return hermitian_part(setup.algebra().from_gns(setup.basis() * solved.solution));
}

PathAction action(const GradientSetup& setup, const OperatorMean& mean, const std::vector<Matrix>& densities) {
  if (densities.size() < 2) throw std::invalid_argument("action: a path needs at least two densities");
  const double n = static_cast<double>(densities.size() - 1);
  PathAction out;
  for (std::size_t k = 0; k + 1 < densities.size(); ++k) {
    const auto cost = segment_cost(setup, mean, densities[k], densities[k + 1]);
    out.length += cost.length;
    out.energy += n * cost.energy;
  }
  if (out.length * out.length > out.energy * (1.0 + 1e-10) + 1e-14) {
    throw NumericalError("action: length^2 exceeds energy");
  }
  return out;
}

TransportResult w_upper_bound(const GradientSetup& setup, const OperatorMean& mean, const DensityOperator& rho0,
                              const DensityOperator& rho1, int segments, int iters, std::uint64_t seed) {
  if (segments < 1) throw std::invalid_argument("w_upper_bound: need at least one segment");
  if (iters < 0) throw std::invalid_argument("w_upper_bound: iters must be >= 0");
  const auto& algebra = setup.algebra();
  if (setup.restriction() &&
      (!setup.restriction()->contains(rho0.matrix(), 1e-9) || !setup.restriction()->contains(rho1.matrix(), 1e-9))) {
    throw std::invalid_argument("w_upper_bound: endpoints must lie in the restriction subalgebra");
  }
  const Subalgebra fix = fixed_point_algebra(setup.generator()).algebra;
  check_connectable(fix, rho0.matrix(), rho1.matrix());

  TransportResult result;
  result.path.mean = std::string(mean.name());
  const double distance = algebra.gns_norm(rho1.matrix() - rho0.matrix());
  std::vector<Matrix>& path = result.path.densities;
  if (segments % 2 == 0 && segments >= 4 && distance > 1e-14) {
    const TransportResult coarse = w_upper_bound(setup, mean, rho0, rho1, segments / 2, iters, seed);
    result.levels = coarse.levels + 1;
    for (std::size_t k = 0; k + 1 < coarse.path.densities.size(); ++k) {
      path.push_back(coarse.path.densities[k]);
      path.push_back(0.5 * (coarse.path.densities[k] + coarse.path.densities[k + 1]));
    }
    path.push_back(coarse.path.densities.back());
  } else {
    for (int k = 0; k <= segments; ++k) {
      const double s = static_cast<double>(k) / segments;
      path.push_back((1.0 - s) * rho0.matrix() + s * rho1.matrix());
    }
  }

  const double n = static_cast<double>(segments);
  std::vector<SegmentCost> costs;
  for (int k = 0; k < segments; ++k) costs.push_back(segment_cost(setup, mean, path[k], path[k + 1]));
  auto totals = [&] {
    PathAction a;
    for (const auto& c : costs) {
      a.length += c.length;
      a.energy += n * c.energy;
    }
    return a;
  };
  PathAction current = totals();
  result.bound = current.length;
  std::vector<Matrix> best_path = path;
  result.energy_trace.push_back(current.energy);
  result.length_trace.push_back(current.length);

  const std::vector<Matrix> directions = distance > 1e-14 ? perturbation_basis(setup, fix) : std::vector<Matrix>{};
  std::vector<std::pair<int, int>> coords;
  for (int k = 1; k < segments; ++k) {
    for (int b = 0; b < static_cast<int>(directions.size()); ++b) coords.emplace_back(k, b);
  }
  Rng rng = stream_rng(seed, static_cast<std::uint64_t>(segments));
  double step = 0.5 * distance / n;
  for (int sweep = 0; sweep < iters && !coords.empty() && step > 1e-9 * (1.0 + distance); ++sweep) {
    std::shuffle(coords.begin(), coords.end(), rng);
    bool improved = false;
    for (const auto& [k, b] : coords) {
      const double old_local = costs[k - 1].energy + costs[k].energy;
      for (double sign : {1.0, -1.0}) {
        const Matrix trial = path[k] + sign * step * directions[static_cast<std::size_t>(b)];
        if (algebra.min_eigenvalue(trial) <= 1e-12) continue;
        SegmentCost left;
        SegmentCost right;
        try {
          left = segment_cost(setup, mean, path[k - 1], trial);
          right = segment_cost(setup, mean, trial, path[k + 1]);
        } catch (const NumericalError&) {
          continue;
        }
        if (left.energy + right.energy < old_local * (1.0 - 1e-13)) {
          path[k] = trial;
          costs[k - 1] = left;
          costs[k] = right;
          improved = true;
          break;
        }
      }
    }
    current = totals();
    result.energy_trace.push_back(current.energy);
    result.length_trace.push_back(current.length);
    if (current.length < result.bound) {
      result.bound = current.length;
      best_path = path;
    }
    if (!improved) step *= 0.5;
  }

  path = best_path;
  result.energy = action(setup, mean, path).energy;
  for (int k = 0; k < segments; ++k) {
    result.path.potentials.push_back(continuity_solve(setup, mean, DensityOperator::normalized(algebra, path[k]),
                                                      DensityOperator::normalized(algebra, path[k + 1]), 1.0 / n));
  }
  return result;
}

}  // namespace ncgrad
