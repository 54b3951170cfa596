#pragma once

#include <cstdint>

#include "ncgrad/random.hpp"
#include "ncgrad/zoo.hpp"

namespace ncgrad::test {

inline double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

inline Rng rng_for(std::uint64_t index) { return stream_rng(20261017, index); }

}  // namespace ncgrad::test
