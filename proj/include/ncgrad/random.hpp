#pragma once

#include <cstdint>
#include <random>

#include "ncgrad/linalg.hpp"

namespace ncgrad {

using Rng = std::mt19937_64;

/// Independent stream for sample `index` of a run seeded with `seed`; results
/// do not depend on which worker draws which sample.
[[nodiscard]] inline Rng stream_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6e636772u};
  return Rng(seq);
}

/// i.i.d. standard complex Gaussian entries (real and imaginary parts N(0, 1/2)).
[[nodiscard]] inline Matrix random_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = Complex(normal(rng), normal(rng));
  }
  return out;
}

[[nodiscard]] inline Matrix random_hermitian(Index dim, Rng& rng) {
  return hermitian_part(random_gaussian(dim, dim, rng));
}

[[nodiscard]] inline Matrix random_unitary(Index dim, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_gaussian(dim, dim, rng));
  return qr.householderQ() * Matrix::Identity(dim, dim);
}

}  // namespace ncgrad
