#include "ncgrad/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

namespace ncgrad {

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

double frobenius_norm(const Matrix& a) { return a.norm(); }

Matrix hermitian_part(const Matrix& a) { return (a + a.adjoint()) / 2.0; }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

bool is_hermitian(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

SpectralDecomposition eig_hermitian(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw NumericalError("eig_hermitian: matrix is not square");
  }
  const Matrix sym = hermitian_part(a);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eig_hermitian: eigensolver did not converge (dim " << a.rows() << ")";
    throw NumericalError(msg.str());
  }
  SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  const double residual = (out.reconstruct() - sym).norm();
  if (residual > 1e-10 * (1.0 + sym.norm())) {
    std::ostringstream msg;
    msg << "eig_hermitian: reconstruction residual " << residual << " exceeds tolerance";
    throw NumericalError(msg.str());
  }
  return out;
}

Matrix matrix_function(const SpectralDecomposition& spec, const std::function<double(double)>& f) {
  RealVector values(spec.dim());
  for (Index k = 0; k < spec.dim(); ++k) {
    const double lambda = spec.eigenvalues(k);
    double value = 0.0;
    try {
      value = f(lambda);
    } catch (const DomainError&) {
      std::ostringstream msg;
      msg << "matrix_function: function undefined at eigenvalue " << lambda;
      throw DomainError(msg.str());
    }
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg << "matrix_function: function undefined at eigenvalue " << lambda;
      throw DomainError(msg.str());
    }
    values(k) = value;
  }
  return spec.eigenvectors * values.cast<Complex>().asDiagonal() * spec.eigenvectors.adjoint();
}

Matrix matrix_function(const Matrix& a, const std::function<double(double)>& f) {
  return matrix_function(eig_hermitian(a), f);
}

PsdResult psd_check(const Matrix& a, double tol) {
  if (a.size() == 0) return {true, 0.0};
  const auto spec = eig_hermitian(a);
  const double min_eig = spec.eigenvalues(0);
  const double op_norm = spec.eigenvalues.cwiseAbs().maxCoeff();
  return {min_eig >= -tol * (1.0 + op_norm), min_eig};
}

Vector vectorize(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix devectorize(const Vector& v, Index dim) {
  if (v.size() != dim * dim) {
    throw NumericalError("devectorize: size mismatch");
  }
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix superop_matrix(const MatrixMap& action, Index dim) {
  const Index n = dim * dim;
  Matrix out(n, n);
  for (Index k = 0; k < n; ++k) {
    Matrix unit = Matrix::Zero(dim, dim);
    unit(k % dim, k / dim) = 1.0;
    const Matrix image = action(unit);
    if (image.rows() != dim || image.cols() != dim) {
      throw NumericalError("superop_matrix: action changes the matrix size");
    }
    out.col(k) = vectorize(image);
  }

  // Linearity on seeded random pairs: the matrix must reproduce the action.
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 3; ++trial) {
    Matrix x(dim, dim);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = Complex(normal(rng), normal(rng));
    const Matrix direct = action(x);
    const Vector via_matrix = out * vectorize(x);
    const double err = (vectorize(direct) - via_matrix).norm();
    if (err > 1e-10 * (1.0 + direct.norm() + x.norm() * out.norm())) {
      std::ostringstream msg;
      msg << "superop_matrix: action is not linear (residual " << err << ")";
      throw NumericalError(msg.str());
    }
  }
  return out;
}

PencilResult largest_generalized_eigenvalue(const Matrix& a, const Matrix& b, double rank_tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw NumericalError("largest_generalized_eigenvalue: shape mismatch");
  }
  PencilResult result;
  const auto bspec = eig_hermitian(b);
  result.b_spectrum = bspec.eigenvalues;
  const double b_norm = bspec.eigenvalues.cwiseAbs().maxCoeff();
  const double a_norm = a.norm();
  const double cut = rank_tol * b_norm;

  std::vector<Index> range;
  std::vector<Index> kernel;
  for (Index k = 0; k < bspec.dim(); ++k) {
    const double lambda = bspec.eigenvalues(k);
    (lambda > cut ? range : kernel).push_back(k);
  }
  result.rank = static_cast<int>(range.size());

  Matrix vr(a.rows(), static_cast<Index>(range.size()));
  for (std::size_t k = 0; k < range.size(); ++k) vr.col(static_cast<Index>(k)) = bspec.eigenvectors.col(range[k]);
  Matrix vk(a.rows(), static_cast<Index>(kernel.size()));
  for (std::size_t k = 0; k < kernel.size(); ++k) vk.col(static_cast<Index>(k)) = bspec.eigenvectors.col(kernel[k]);

  if (!kernel.empty()) {
    result.kernel_leak = (a * vk).norm();
  }
  const double leak_tol = 1e-8 * std::max({a_norm, b_norm, 1e-300});
  if (result.kernel_leak > leak_tol) {
    // A sees a direction B does not: ambiguous if B's gap around the cutoff
    // is not clean.
    for (Index k : kernel) {
      const double lambda = bspec.eigenvalues(k);
      if (lambda > 0.1 * cut && b_norm > 0.0) {
        std::ostringstream msg;
        msg << "largest_generalized_eigenvalue: rank of B ambiguous near cutoff " << cut
            << " (eigenvalue " << lambda << ", kernel leak " << result.kernel_leak << ")";
        throw NumericalError(msg.str());
      }
    }
    result.status = PencilResult::Status::unbounded;
    result.value = std::numeric_limits<double>::infinity();
    return result;
  }
  if (range.empty()) {
    result.status = PencilResult::Status::zero;
    return result;
  }

  RealVector inv_sqrt(static_cast<Index>(range.size()));
  for (std::size_t k = 0; k < range.size(); ++k) {
    inv_sqrt(static_cast<Index>(k)) = 1.0 / std::sqrt(bspec.eigenvalues(range[k]));
  }
  const Matrix scaled = inv_sqrt.cast<Complex>().asDiagonal() * (vr.adjoint() * a * vr) *
                        inv_sqrt.cast<Complex>().asDiagonal();
  const auto cspec = eig_hermitian(scaled);
  const Index top = cspec.dim() - 1;
  result.value = cspec.eigenvalues(top);
  result.maximizer = vr * (inv_sqrt.cast<Complex>().asDiagonal() * cspec.eigenvectors.col(top));
  if (result.value <= 1e-14 * std::max(1.0, a_norm / std::max(b_norm, 1e-300))) {
    result.status = PencilResult::Status::zero;
    result.value = 0.0;
  }
  return result;
}

}  // namespace ncgrad
