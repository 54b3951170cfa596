#include "ncgrad/qms.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ncgrad {

LindbladGenerator::LindbladGenerator(TracialAlgebra algebra, std::vector<Jump> jumps)
    : algebra_(std::move(algebra)), jumps_(std::move(jumps)) {
  for (std::size_t j = 0; j < jumps_.size(); ++j) {
    const auto& jump = jumps_[j];
    if (!(jump.weight > 0.0) || !std::isfinite(jump.weight)) {
      throw NumericalError("LindbladGenerator: jump " + std::to_string(j) + " has non-positive weight");
    }
    if (!algebra_.contains(jump.v, 1e-12)) {
      throw NumericalError("LindbladGenerator: jump " + std::to_string(j) + " is not an element of the algebra");
    }
    if (!is_hermitian(jump.v, 1e-12)) {
      throw NumericalError("LindbladGenerator: jump " + std::to_string(j) + " is not self-adjoint");
    }
    jumps_[j].v = hermitian_part(jump.v);
  }
  superop_ = algebra_.superop([this](const Matrix& x) { return apply(x); });
  superop_ = hermitian_part(superop_);
}

Matrix LindbladGenerator::apply(const Matrix& x) const {
  if (x.rows() != algebra_.dim() || x.cols() != algebra_.dim()) {
    throw NumericalError("lindblad_apply: dimension mismatch");
  }
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const auto& jump : jumps_) {
    const Matrix vx = jump.v * x;
    const Matrix xv = x * jump.v;
    out += jump.weight * (jump.v * vx + xv * jump.v - 2.0 * vx * jump.v);
  }
  return out;
}

Semigroup::Semigroup(const LindbladGenerator& generator)
    : algebra_(generator.algebra()), spectrum_(eig_hermitian(generator.superop())) {}

Matrix Semigroup::superop(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("semigroup: t must be finite and >= 0");
  Vector decay(spectrum_.dim());
  for (Index k = 0; k < spectrum_.dim(); ++k) decay(k) = std::exp(-t * spectrum_.eigenvalues(k));
  return spectrum_.eigenvectors * decay.asDiagonal() * spectrum_.eigenvectors.adjoint();
}

Matrix Semigroup::apply(double t, const Matrix& x) const {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("semigroup: t must be finite and >= 0");
  const Vector coeffs = spectrum_.eigenvectors.adjoint() * algebra_.to_gns(x);
  Vector scaled(coeffs.size());
  for (Index k = 0; k < coeffs.size(); ++k) scaled(k) = coeffs(k) * std::exp(-t * spectrum_.eigenvalues(k));
  return algebra_.from_gns(spectrum_.eigenvectors * scaled);
}

DensityOperator Semigroup::apply(double t, const DensityOperator& rho) const {
  return DensityOperator::from_matrix(algebra_, hermitian_part(apply(t, rho.matrix())), 1e-10);
}

namespace {

// Choi matrix sum_{kl} e_kl (x) Phi(pinch(e_kl)) of the extension of a map of
// the algebra to the full dim x dim matrices.
Matrix choi_matrix(const TracialAlgebra& algebra, const Matrix& gns_superop) {
  const int n = algebra.dim();
  Matrix choi = Matrix::Zero(n * n, n * n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      Matrix unit = Matrix::Zero(n, n);
      unit(k, l) = 1.0;
      if (!algebra.contains(unit)) continue;
      const Matrix image = algebra.from_gns(gns_superop * algebra.to_gns(unit));
      choi.block(k * n, l * n, n, n) = image;
    }
  }
  return choi;
}

}  // namespace

QmsReport verify_qms(const LindbladGenerator& generator, std::span<const double> t_samples, int choi_cap) {
  QmsReport report;
  const auto& algebra = generator.algebra();
  auto add = [&report](QmsCheck check) {
    report.passed = report.passed && check.passed;
    report.checks.push_back(std::move(check));
  };

  const Matrix& l = generator.superop();
  const double scale = 1.0 + l.norm();
  {
    const double res = algebra.gns_norm(generator.apply(algebra.identity()));
    add({"unitality L(1) = 0", res <= 1e-10 * scale, res, ""});
  }
  {
    // The cached superop is symmetrized; test the raw action instead.
    const Matrix raw = algebra.superop([&](const Matrix& x) { return generator.apply(x); });
    const double res = (raw - raw.adjoint()).norm();
    add({"tau-symmetry L = L^dagger", res <= 1e-10 * scale, res, ""});
  }
  const Semigroup semigroup(generator);
  {
    const double min_eig = semigroup.spectrum().eigenvalues(0);
    add({"spectrum of L in [0, inf)", min_eig >= -1e-9, std::max(0.0, -min_eig),
         "min eigenvalue " + std::to_string(min_eig)});
  }
  for (double t : t_samples) {
    const Matrix pt = semigroup.superop(t);
    const Matrix one = algebra.identity();
    const double unital = algebra.gns_norm(algebra.from_gns(pt * algebra.to_gns(one)) - one);
    std::ostringstream tag;
    tag << "t=" << t;
    add({"P_t(1) = 1 at " + tag.str(), unital <= 1e-9, unital, ""});
    if (algebra.gns_dim() > choi_cap) {
      add({"complete positivity at " + tag.str(), false, 0.0, "GNS dimension exceeds Choi cap"});
      continue;
    }
    const Matrix choi = choi_matrix(algebra, pt);
    const double tr = choi.trace().real();
    const double min_eig = eig_hermitian(choi / tr).eigenvalues(0);
    add({"complete positivity at " + tag.str(), min_eig >= -1e-9, std::max(0.0, -min_eig),
         "normalized Choi min eigenvalue " + std::to_string(min_eig)});
  }
  return report;
}

FixedPointAlgebra fixed_point_algebra(const LindbladGenerator& generator) {
  const auto spec = eig_hermitian(generator.superop());
  const auto& algebra = generator.algebra();
  std::vector<Index> kernel;
  double gap = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < spec.dim(); ++k) {
    const double lambda = spec.eigenvalues(k);
    if (std::abs(lambda) < 1e-9) {
      kernel.push_back(k);
    } else if (lambda > 0.0) {
      gap = std::min(gap, lambda);
    }
  }
  Matrix basis(algebra.gns_dim(), static_cast<Index>(kernel.size()));
  for (std::size_t k = 0; k < kernel.size(); ++k) basis.col(static_cast<Index>(k)) = spec.eigenvectors.col(kernel[k]);
  return {Subalgebra::from_gns_basis(algebra, std::move(basis), 1e-8), gap};
}

}  // namespace ncgrad
