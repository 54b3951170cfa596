#include "ncgrad/search.hpp"

#include <cmath>
#include <limits>

namespace ncgrad {

DescentResult coordinate_descent(const std::function<double(const Vector&)>& f, Vector start,
                                 const DescentOptions& options) {
  DescentResult result;
  auto evaluate = [&](const Vector& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  if (options.normalize && start.norm() > 0.0) start /= start.norm();
  result.argmin = start;
  result.value = evaluate(start);
  double step = options.initial_step;
  for (int sweep = 0; sweep < options.max_sweeps && step >= options.min_step; ++sweep) {
    if (result.value == -std::numeric_limits<double>::infinity()) break;
    bool improved = false;
    for (Index p = 0; p < 2 * result.argmin.size(); ++p) {
      const Complex unit = (p % 2 == 0) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
      for (double sign : {1.0, -1.0}) {
        Vector trial = result.argmin;
        trial(p / 2) += sign * step * unit;
        const double value = evaluate(trial);
        if (value < result.value - 1e-14 * (1.0 + std::abs(result.value))) {
          result.value = value;
          result.argmin = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    // f is assumed scale invariant when normalizing.
    if (options.normalize && result.argmin.norm() > 0.0) result.argmin /= result.argmin.norm();
    if (!improved) step *= 0.5;
  }
  return result;
}

}  // namespace ncgrad
