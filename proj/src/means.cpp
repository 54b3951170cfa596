#include "ncgrad/means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ncgrad {

OperatorMean OperatorMean::by_name(std::string_view name) {
  for (const auto& mean : builtins()) {
    if (mean.name() == name) return mean;
  }
  throw std::invalid_argument("unknown operator mean '" + std::string(name) +
                              "' (expected arithmetic|logarithmic|geometric|harmonic|left|right)");
}

std::vector<OperatorMean> OperatorMean::builtins() {
  return {OperatorMean(MeanKind::arithmetic), OperatorMean(MeanKind::logarithmic),
          OperatorMean(MeanKind::geometric),  OperatorMean(MeanKind::harmonic),
          OperatorMean(MeanKind::left),       OperatorMean(MeanKind::right)};
}

std::string_view OperatorMean::name() const {
  switch (kind_) {
    case MeanKind::arithmetic: return "arithmetic";
    case MeanKind::logarithmic: return "logarithmic";
    case MeanKind::geometric: return "geometric";
    case MeanKind::harmonic: return "harmonic";
    case MeanKind::left: return "left";
    case MeanKind::right: return "right";
  }
  return "unknown";
}

namespace {

double logarithmic_kernel(double s, double t) {
  if (s <= 0.0 || t <= 0.0) return 0.0;
  if (s == t) return s;
  const double x = std::log(t) - std::log(s);
  if (std::abs(x) < 1e-6) {
    // s (e^x - 1)/x
    return s * (1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0);
  }
  return (t - s) / x;
}

}  // namespace

double OperatorMean::operator()(double s, double t) const {
  switch (kind_) {
    case MeanKind::arithmetic: return 0.5 * (s + t);
    case MeanKind::logarithmic: return logarithmic_kernel(s, t);
    case MeanKind::geometric: return (s <= 0.0 || t <= 0.0) ? 0.0 : std::sqrt(s * t);
    case MeanKind::harmonic: return (s <= 0.0 || t <= 0.0) ? 0.0 : 2.0 * s * t / (s + t);
    case MeanKind::left: return s;
    case MeanKind::right: return t;
  }
  return 0.0;
}

Matrix OperatorMean::kubo_ando(const Matrix& a, const Matrix& b) const {
  const auto aspec = eig_hermitian(a);
  if (aspec.eigenvalues(0) <= 0.0) throw NumericalError("kubo_ando: first argument must be positive definite");
  const Matrix a_half = matrix_function(aspec, [](double x) { return std::sqrt(x); });
  const Matrix a_inv_half = matrix_function(aspec, [](double x) { return 1.0 / std::sqrt(x); });
  const Matrix inner = hermitian_part(a_inv_half * b * a_inv_half);
  const Matrix f_inner = matrix_function(inner, [this](double x) { return (*this)(1.0, std::max(x, 0.0)); });
  return hermitian_part(a_half * f_inner * a_half);
}

// ---------------------------------------------------------------------------

RhoHat::RhoHat(const OperatorMean& mean, const TracialAlgebra& algebra, const Matrix& rho) : algebra_(algebra) {
  for (const auto& spec : algebra.block_eig(rho)) {
    const Index d = spec.dim();
    RealVector lambda = spec.eigenvalues;
    for (Index k = 0; k < d; ++k) {
      if (lambda(k) < -1e-10) {
        std::ostringstream msg;
        msg << "rho_hat: density has negative eigenvalue " << lambda(k);
        throw NumericalError(msg.str());
      }
      lambda(k) = std::max(lambda(k), 0.0);
    }
    Eigen::MatrixXd m(d, d);
    for (Index k = 0; k < d; ++k) {
      for (Index l = 0; l < d; ++l) m(k, l) = mean(lambda(k), lambda(l));
    }
    eigenvectors_.push_back(spec.eigenvectors);
    multipliers_.push_back(std::move(m));
  }
}

Matrix RhoHat::apply(const Matrix& xi) const {
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < eigenvectors_.size(); ++i) {
    const Matrix& u = eigenvectors_[i];
    const Matrix rotated = u.adjoint() * algebra_.block(xi, i) * u;
    const Matrix scaled = rotated.cwiseProduct(multipliers_[i].cast<Complex>());
    blocks.push_back(u * scaled * u.adjoint());
  }
  return algebra_.assemble(blocks);
}

TangentVector RhoHat::apply(const TangentVector& xi) const {
  TangentVector out;
  out.reserve(xi.size());
  for (const auto& c : xi) out.push_back(apply(c));
  return out;
}

Matrix RhoHat::block_matrix() const {
  const int n = algebra_.gns_dim();
  Matrix out = Matrix::Zero(n, n);
  Index offset = 0;
  for (std::size_t i = 0; i < eigenvectors_.size(); ++i) {
    const Matrix& u = eigenvectors_[i];
    const Index d = u.rows();
    const Matrix w = kron(u.conjugate(), u);
    // Column-stacked multiplier: entry (k, l) sits at k + l d.
    const Eigen::Map<const RealVector> diag(multipliers_[i].data(), d * d);
    out.block(offset, offset, d * d, d * d) = w * diag.cast<Complex>().asDiagonal() * w.adjoint();
    offset += d * d;
  }
  return hermitian_part(out);
}

double RhoHat::quadratic_form(const TangentVector& xi) const {
  Complex total = 0.0;
  for (const auto& c : xi) total += algebra_.gns_inner(c, apply(c));
  const double value = total.real();
  if (value < -1e-10 * (1.0 + std::abs(value))) {
    std::ostringstream msg;
    msg << "metric_norm_sq: negative quadratic form " << value;
    throw NumericalError(msg.str());
  }
  return std::max(value, 0.0);
}

TangentVector rho_hat_apply(const OperatorMean& mean, const TracialAlgebra& algebra, const DensityOperator& rho,
                            const TangentVector& xi) {
  return RhoHat(mean, algebra, rho.matrix()).apply(xi);
}

Matrix rho_hat_matrix(const OperatorMean& mean, const TracialAlgebra& algebra, const DensityOperator& rho,
                      int components) {
  const Matrix block = RhoHat(mean, algebra, rho.matrix()).block_matrix();
  return kron(Matrix::Identity(components, components), block);
}

double metric_norm_sq(const OperatorMean& mean, const TracialAlgebra& algebra, const DensityOperator& rho,
                      const TangentVector& xi) {
  return RhoHat(mean, algebra, rho.matrix()).quadratic_form(xi);
}

// ---------------------------------------------------------------------------

namespace {

Matrix random_pd(Index dim, Rng& rng, double shift) {
  const Matrix g = random_gaussian(dim, dim, rng);
  return hermitian_part(g * g.adjoint() / static_cast<double>(dim)) + shift * Matrix::Identity(dim, dim);
}

Matrix random_psd(Index dim, Rng& rng) {
  const Matrix g = random_gaussian(dim, 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(dim)), rng);
  return hermitian_part(g * g.adjoint() / static_cast<double>(dim));
}

double relative_margin(const Matrix& larger, const Matrix& smaller) {
  const double min_eig = eig_hermitian(larger - smaller).eigenvalues(0);
  return min_eig / (1.0 + larger.norm());
}

}  // namespace

MeanAuditReport mean_axiom_audit(const OperatorMean& mean, int samples, std::uint64_t seed) {
  MeanAuditReport report;
  report.mean = std::string(mean.name());
  report.monotonicity_margin = std::numeric_limits<double>::infinity();
  report.transformer_margin = std::numeric_limits<double>::infinity();

  for (int s = 0; s < samples; ++s) {
    Rng rng = stream_rng(seed, static_cast<std::uint64_t>(s));
    const Index dim = 2 + static_cast<Index>(s % 3);
    const Matrix a = random_pd(dim, rng, 0.1);
    const Matrix b = random_pd(dim, rng, 0.1);
    const Matrix c = a + random_psd(dim, rng);
    const Matrix d = b + random_psd(dim, rng);
    const double mono = relative_margin(mean.kubo_ando(c, d), mean.kubo_ando(a, b));
    if (mono < report.monotonicity_margin) {
      report.monotonicity_margin = mono;
      if (mono < -1e-9) report.witness = "monotonicity violated at sample " + std::to_string(s);
    }
    const Matrix t = random_pd(dim, rng, 0.05);
    const double transformer =
        relative_margin(mean.kubo_ando(t * a * t, t * b * t), t * mean.kubo_ando(a, b) * t);
    if (transformer < report.transformer_margin) {
      report.transformer_margin = transformer;
      if (transformer < -1e-9) report.witness = "transformer inequality violated at sample " + std::to_string(s);
    }
  }
  for (Index dim = 1; dim <= 4; ++dim) {
    const Matrix id = Matrix::Identity(dim, dim);
    report.normalization_error = std::max(report.normalization_error, (mean.kubo_ando(id, id) - id).norm());
  }

  report.symmetric_on_grid = true;
  const std::vector<double> grid = {0.0, 1e-3, 0.1, 0.5, 1.0, 2.0, 7.5, 40.0};
  for (double s : grid) {
    for (double t : grid) {
      if (std::abs(mean(s, t) - mean(t, s)) > 1e-12 * (1.0 + mean(s, t))) report.symmetric_on_grid = false;
      for (double t2 : grid) {
        if (t2 > t && mean(s, t2) < mean(s, t) - 1e-12) report.scalar_monotone = false;
        if (t2 > t && mean(t2, s) < mean(t, s) - 1e-12) report.scalar_monotone = false;
      }
    }
    if (s > 0.0 && std::abs(mean(s, s) - s) > 1e-12 * s) report.scalar_monotone = false;
  }
  report.symmetry_flag_consistent = report.symmetric_on_grid == mean.symmetric();

  report.passed = report.monotonicity_margin >= -1e-9 && report.transformer_margin >= -1e-9 &&
                  report.normalization_error <= 1e-12 && report.symmetry_flag_consistent && report.scalar_monotone;
  if (!report.passed && report.witness.empty()) report.witness = "scalar checks failed";
  return report;
}

}  // namespace ncgrad
