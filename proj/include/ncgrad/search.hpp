#pragma once

#include <functional>

#include "ncgrad/linalg.hpp"

namespace ncgrad {

struct DescentOptions {
  double initial_step = 0.3;
  double min_step = 1e-6;
  int max_sweeps = 60;
  bool normalize = true;   // rescale the iterate to unit norm after each sweep
};

struct DescentResult {
  Vector argmin;
  double value = 0.0;
  long evaluations = 0;
};

/// Derivative-free minimization of f over complex coordinates: each sweep
/// tries +-step along the real and imaginary part of every coordinate and
/// keeps the first improvement; a sweep without improvement halves the step.
/// Non-finite values of f count as "worse than anything".
[[nodiscard]] DescentResult coordinate_descent(const std::function<double(const Vector&)>& f, Vector start,
                                               const DescentOptions& options);

}  // namespace ncgrad
