#include "ncgrad/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace ncgrad {

TangentModule::TangentModule(const LindbladGenerator& generator) : algebra_(generator.algebra()) {
  for (const auto& jump : generator.jumps()) {
    const Matrix w = std::sqrt(jump.weight) * jump.v;
    scaled_jumps_.push_back(w);
    derivations_.push_back(algebra_.superop([&w](const Matrix& x) -> Matrix { return w * x - x * w; }));
  }
}

Matrix TangentModule::partial(int j, const Matrix& x) const {
  if (j < 0 || j >= components()) throw std::out_of_range("TangentModule: component index out of range");
  const Matrix& w = scaled_jumps_[static_cast<std::size_t>(j)];
  return w * x - x * w;
}

TangentVector TangentModule::derivative(const Matrix& x) const {
  TangentVector out;
  out.reserve(scaled_jumps_.size());
  for (int j = 0; j < components(); ++j) out.push_back(partial(j, x));
  return out;
}

Matrix TangentModule::stacked() const {
  const int n = algebra_.gns_dim();
  Matrix out(static_cast<Index>(components()) * n, n);
  for (int j = 0; j < components(); ++j) out.block(static_cast<Index>(j) * n, 0, n, n) = derivations_[static_cast<std::size_t>(j)];
  return out;
}

Matrix TangentModule::gamma(const Matrix& x, const Matrix& y) const {
  Matrix out = algebra_.zero();
  for (int j = 0; j < components(); ++j) out += partial(j, x).adjoint() * partial(j, y);
  return out;
}

Matrix TangentModule::gamma_vec(const TangentVector& xi) const {
  Matrix out = algebra_.zero();
  for (const auto& c : xi) out += c.adjoint() * c;
  return out;
}

Complex TangentModule::inner(const TangentVector& xi, const TangentVector& eta) const {
  if (xi.size() != eta.size()) throw NumericalError("TangentModule::inner: component count mismatch");
  Complex out = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) out += algebra_.gns_inner(xi[j], eta[j]);
  return out;
}

TangentVector TangentModule::left(const Matrix& a, const TangentVector& xi) const {
  TangentVector out;
  for (const auto& c : xi) out.push_back(a * c);
  return out;
}

TangentVector TangentModule::right(const TangentVector& xi, const Matrix& a) const {
  TangentVector out;
  for (const auto& c : xi) out.push_back(c * a);
  return out;
}

TangentVector TangentModule::involution(const TangentVector& xi) const {
  TangentVector out;
  for (const auto& c : xi) out.push_back(c.adjoint());
  return out;
}

TangentVector TangentModule::to_tangent(const Vector& stacked_gns) const {
  const int n = algebra_.gns_dim();
  if (stacked_gns.size() != static_cast<Index>(components()) * n) {
    throw NumericalError("TangentModule::to_tangent: size mismatch");
  }
  TangentVector out;
  for (int j = 0; j < components(); ++j) out.push_back(algebra_.from_gns(stacked_gns.segment(static_cast<Index>(j) * n, n)));
  return out;
}

Vector TangentModule::to_stacked_gns(const TangentVector& xi) const {
  const int n = algebra_.gns_dim();
  Vector out(static_cast<Index>(xi.size()) * n);
  for (std::size_t j = 0; j < xi.size(); ++j) out.segment(static_cast<Index>(j) * n, n) = algebra_.to_gns(xi[j]);
  return out;
}

}  // namespace ncgrad
