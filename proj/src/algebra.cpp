#include "ncgrad/algebra.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace ncgrad {

TracialAlgebra::TracialAlgebra(std::vector<int> block_dims, std::vector<double> block_weights)
    : block_dims_(std::move(block_dims)), block_weights_(std::move(block_weights)) {
  if (block_dims_.empty() || block_dims_.size() != block_weights_.size()) {
    throw NumericalError("TracialAlgebra: need one positive weight per block");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < block_dims_.size(); ++i) {
    if (block_dims_[i] < 1) throw NumericalError("TracialAlgebra: block dimensions must be >= 1");
    if (!(block_weights_[i] > 0.0)) throw NumericalError("TracialAlgebra: block weights must be > 0");
    total += block_weights_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "TracialAlgebra: block weights sum to " << total << ", expected 1";
    throw NumericalError(msg.str());
  }
  for (std::size_t i = 0; i < block_dims_.size(); ++i) {
    offsets_.push_back(dim_);
    gns_offsets_.push_back(gns_dim_);
    scales_.push_back(std::sqrt(block_weights_[i] / block_dims_[i]));
    dim_ += block_dims_[i];
    gns_dim_ += block_dims_[i] * block_dims_[i];
  }
}

TracialAlgebra TracialAlgebra::full(int n) { return TracialAlgebra({n}, {1.0}); }

Matrix TracialAlgebra::identity() const { return Matrix::Identity(dim_, dim_); }

Matrix TracialAlgebra::zero() const { return Matrix::Zero(dim_, dim_); }

Matrix TracialAlgebra::block(const Matrix& x, std::size_t i) const {
  return x.block(offsets_[i], offsets_[i], block_dims_[i], block_dims_[i]);
}

Matrix TracialAlgebra::assemble(const std::vector<Matrix>& blocks) const {
  if (blocks.size() != num_blocks()) throw NumericalError("TracialAlgebra::assemble: block count mismatch");
  Matrix out = zero();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    out.block(offsets_[i], offsets_[i], block_dims_[i], block_dims_[i]) = blocks[i];
  }
  return out;
}

bool TracialAlgebra::contains(const Matrix& x, double tol) const {
  if (x.rows() != dim_ || x.cols() != dim_) return false;
  if (is_single_block()) return true;
  const double scale = 1.0 + x.cwiseAbs().maxCoeff();
  return (x - pinch(x)).cwiseAbs().maxCoeff() <= tol * scale;
}

Matrix TracialAlgebra::pinch(const Matrix& x) const {
  if (is_single_block()) return x;
  Matrix out = zero();
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    out.block(offsets_[i], offsets_[i], block_dims_[i], block_dims_[i]) = block(x, i);
  }
  return out;
}

Complex TracialAlgebra::trace(const Matrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw NumericalError("trace: dimension mismatch");
  Complex out = 0.0;
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    out += block_weights_[i] / block_dims_[i] * block(x, i).trace();
  }
  return out;
}

Complex TracialAlgebra::gns_inner(const Matrix& x, const Matrix& y) const {
  return to_gns(x).dot(to_gns(y));
}

double TracialAlgebra::gns_norm(const Matrix& x) const { return to_gns(x).norm(); }

Vector TracialAlgebra::to_gns(const Matrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw NumericalError("to_gns: dimension mismatch");
  Vector out(gns_dim_);
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    const int d = block_dims_[i];
    for (int c = 0; c < d; ++c) {
      for (int r = 0; r < d; ++r) {
        out(gns_offsets_[i] + r + c * d) = scales_[i] * x(offsets_[i] + r, offsets_[i] + c);
      }
    }
  }
  return out;
}

Matrix TracialAlgebra::from_gns(const Vector& v) const {
  if (v.size() != gns_dim_) throw NumericalError("from_gns: dimension mismatch");
  Matrix out = zero();
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    const int d = block_dims_[i];
    for (int c = 0; c < d; ++c) {
      for (int r = 0; r < d; ++r) {
        out(offsets_[i] + r, offsets_[i] + c) = v(gns_offsets_[i] + r + c * d) / scales_[i];
      }
    }
  }
  return out;
}

Matrix TracialAlgebra::gns_basis_element(int k) const {
  Vector e = Vector::Zero(gns_dim_);
  e(k) = 1.0;
  return from_gns(e);
}

Matrix TracialAlgebra::superop(const MatrixMap& action) const {
  Matrix out(gns_dim_, gns_dim_);
  for (int k = 0; k < gns_dim_; ++k) out.col(k) = to_gns(action(gns_basis_element(k)));
  return out;
}

Matrix TracialAlgebra::left_multiplication(const Matrix& a) const {
  return superop([&](const Matrix& x) -> Matrix { return a * x; });
}

Matrix TracialAlgebra::right_multiplication(const Matrix& a) const {
  return superop([&](const Matrix& x) -> Matrix { return x * a; });
}

Matrix TracialAlgebra::transpose_permutation() const {
  Matrix out = Matrix::Zero(gns_dim_, gns_dim_);
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    const int d = block_dims_[i];
    for (int c = 0; c < d; ++c) {
      for (int r = 0; r < d; ++r) out(gns_offsets_[i] + c + r * d, gns_offsets_[i] + r + c * d) = 1.0;
    }
  }
  return out;
}

std::vector<SpectralDecomposition> TracialAlgebra::block_eig(const Matrix& x) const {
  std::vector<SpectralDecomposition> out;
  out.reserve(num_blocks());
  for (std::size_t i = 0; i < num_blocks(); ++i) out.push_back(eig_hermitian(block(x, i)));
  return out;
}

Matrix TracialAlgebra::apply_function(const Matrix& x, const std::function<double(double)>& f) const {
  std::vector<Matrix> blocks;
  for (const auto& spec : block_eig(x)) blocks.push_back(matrix_function(spec, f));
  return assemble(blocks);
}

double TracialAlgebra::min_eigenvalue(const Matrix& x) const {
  double out = std::numeric_limits<double>::infinity();
  for (const auto& spec : block_eig(x)) out = std::min(out, spec.eigenvalues(0));
  return out;
}

TracialAlgebra tensor(const TracialAlgebra& a, const TracialAlgebra& b) {
  if (!a.is_single_block() || !b.is_single_block()) {
    throw NumericalError("tensor: only single-block (full matrix) algebras are supported");
  }
  return TracialAlgebra::full(a.dim() * b.dim());
}

// ---------------------------------------------------------------------------

Subalgebra::Subalgebra(TracialAlgebra algebra, Matrix basis)
    : algebra_(std::move(algebra)), basis_(std::move(basis)) {}

namespace {

// Appends v to the orthonormal columns of `basis` if it adds a new direction.
bool try_extend(Matrix& basis, Vector v, double tol) {
  const double norm0 = v.norm();
  if (norm0 == 0.0) return false;
  for (int pass = 0; pass < 2; ++pass) {
    if (basis.cols() > 0) v -= basis * (basis.adjoint() * v);
  }
  const double norm = v.norm();
  if (norm <= tol * std::max(1.0, norm0)) return false;
  basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
  basis.col(basis.cols() - 1) = v / norm;
  return true;
}

double residual_outside(const Matrix& basis, const Vector& v) {
  return (v - basis * (basis.adjoint() * v)).norm();
}

}  // namespace

Subalgebra Subalgebra::generated_by(const TracialAlgebra& algebra, const std::vector<Matrix>& generators,
                                    double tol) {
  Matrix basis(algebra.gns_dim(), 0);
  try_extend(basis, algebra.to_gns(algebra.identity()), tol);
  for (const auto& g : generators) {
    if (!algebra.contains(g, 1e-10)) throw NumericalError("Subalgebra: generator is not an element of the algebra");
    try_extend(basis, algebra.to_gns(g), tol);
    try_extend(basis, algebra.to_gns(g.adjoint()), tol);
  }
  bool grew = true;
  while (grew && basis.cols() < algebra.gns_dim()) {
    grew = false;
    const Index k = basis.cols();
    std::vector<Matrix> elements;
    for (Index i = 0; i < k; ++i) elements.push_back(algebra.from_gns(basis.col(i)));
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < k; ++j) {
        grew |= try_extend(basis, algebra.to_gns(elements[i] * elements[j]), tol);
      }
    }
  }
  return Subalgebra(algebra, std::move(basis));
}

Subalgebra Subalgebra::from_gns_basis(const TracialAlgebra& algebra, Matrix basis, double tol) {
  if (basis.rows() != algebra.gns_dim()) throw NumericalError("Subalgebra: basis has wrong row count");
  const Index k = basis.cols();
  const Matrix gram = basis.adjoint() * basis;
  if ((gram - Matrix::Identity(k, k)).norm() > 1e-8) {
    throw NumericalError("Subalgebra: basis is not GNS-orthonormal");
  }
  const Vector one = algebra.to_gns(algebra.identity());
  if (residual_outside(basis, one) > tol * one.norm()) {
    throw NumericalError("Subalgebra: span does not contain the identity");
  }
  std::vector<Matrix> elements;
  for (Index i = 0; i < k; ++i) elements.push_back(algebra.from_gns(basis.col(i)));
  for (Index i = 0; i < k; ++i) {
    const Vector adj = algebra.to_gns(elements[i].adjoint());
    const double res = residual_outside(basis, adj);
    if (res > tol * (1.0 + adj.norm())) {
      std::ostringstream msg;
      msg << "Subalgebra: span is not *-closed (basis element " << i << ", residual " << res << ")";
      throw NumericalError(msg.str());
    }
  }
  // Product closure on at most 64 deterministic pairs.
  const Index pairs = std::min<Index>(64, k * k);
  for (Index p = 0; p < pairs; ++p) {
    const Index idx = (p * 7919) % (k * k);
    const Index i = idx / k;
    const Index j = idx % k;
    const Matrix prod = elements[i] * elements[j];
    const Vector pv = algebra.to_gns(prod);
    const double res = residual_outside(basis, pv);
    if (res > tol * (1.0 + pv.norm())) {
      std::ostringstream msg;
      msg << "Subalgebra: span is not closed under products (pair " << i << "," << j << ", residual " << res
          << ")";
      throw NumericalError(msg.str());
    }
  }
  return Subalgebra(algebra, std::move(basis));
}

Subalgebra Subalgebra::scalars(const TracialAlgebra& algebra) {
  return generated_by(algebra, {});
}

Subalgebra Subalgebra::whole(const TracialAlgebra& algebra) {
  return Subalgebra(algebra, Matrix::Identity(algebra.gns_dim(), algebra.gns_dim()));
}

Matrix Subalgebra::expectation(const Matrix& x) const {
  const Vector v = algebra_.to_gns(x);
  return algebra_.from_gns(basis_ * (basis_.adjoint() * v));
}

bool Subalgebra::contains(const Matrix& x, double tol) const {
  const Vector v = algebra_.to_gns(x);
  return residual_outside(basis_, v) <= tol * (1.0 + v.norm());
}

// ---------------------------------------------------------------------------

DensityOperator DensityOperator::from_matrix(const TracialAlgebra& algebra, const Matrix& rho, double tol) {
  if (!algebra.contains(rho, 1e-10)) throw NumericalError("density: not an element of the algebra");
  if (!is_hermitian(rho, 1e-10)) throw NumericalError("density: not Hermitian");
  Matrix sym = algebra.pinch(hermitian_part(rho));
  const double min_eig = algebra.min_eigenvalue(sym);
  if (min_eig < -tol) {
    std::ostringstream msg;
    msg << "density: negative eigenvalue " << min_eig;
    throw NumericalError(msg.str());
  }
  const double tr = algebra.trace(sym).real();
  if (std::abs(tr - 1.0) > tol * std::max<double>(1.0, algebra.dim())) {
    std::ostringstream msg;
    msg << "density: tau(rho) = " << tr << ", expected 1";
    throw NumericalError(msg.str());
  }
  return DensityOperator(std::move(sym));
}

DensityOperator DensityOperator::normalized(const TracialAlgebra& algebra, const Matrix& psd) {
  if (!algebra.contains(psd, 1e-10) || !is_hermitian(psd, 1e-10)) {
    throw NumericalError("density: input is not a Hermitian element of the algebra");
  }
  Matrix sym = algebra.pinch(hermitian_part(psd));
  const double tr = algebra.trace(sym).real();
  if (!(tr > 0.0)) throw NumericalError("density: cannot normalize an element with tau <= 0");
  sym /= tr;
  if (algebra.min_eigenvalue(sym) < -1e-12) throw NumericalError("density: input is not positive");
  return DensityOperator(std::move(sym));
}

DensityOperator DensityOperator::trace_state(const TracialAlgebra& algebra) {
  return DensityOperator(algebra.identity());
}

DensityOperator wishart_density(const TracialAlgebra& algebra, Rng& rng, int rank) {
  std::vector<Matrix> blocks;
  for (int d : algebra.block_dims()) {
    const int cols = rank > 0 ? std::min(rank, d) : d;
    const Matrix g = random_gaussian(d, cols, rng);
    blocks.push_back(g * g.adjoint());
  }
  return DensityOperator::normalized(algebra, algebra.assemble(blocks));
}

DensityOperator near_singular_density(const TracialAlgebra& algebra, Rng& rng, double smoothing) {
  std::vector<Matrix> blocks;
  for (int d : algebra.block_dims()) {
    const int cols = std::max(1, d / 2);
    const Matrix g = random_gaussian(d, cols, rng);
    blocks.push_back(g * g.adjoint());
  }
  const Matrix low = DensityOperator::normalized(algebra, algebra.assemble(blocks)).matrix();
  return DensityOperator::normalized(algebra, (1.0 - smoothing) * low + smoothing * algebra.identity());
}

DensityOperator subalgebra_density(const Subalgebra& sub, const Matrix& g) {
  const auto& algebra = sub.algebra();
  const Matrix psd = algebra.pinch(g * g.adjoint());
  return DensityOperator::normalized(algebra, hermitian_part(sub.expectation(psd)));
}

}  // namespace ncgrad
