#pragma once

#include <cstddef>
#include <functional>

namespace ncgrad {

/// Worker count: `requested` if positive, else NCGRAD_THREADS, else the
/// hardware concurrency (at least 1).
[[nodiscard]] int resolve_threads(int requested);

/// Runs body(i) for i in [0, n) on up to `threads` workers. The first
/// exception thrown by any body is rethrown after all workers finish.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace ncgrad
