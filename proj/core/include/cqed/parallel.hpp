// parallel.hpp - Minimal fork-join loop over an index range

#pragma once

#include <cstddef>
#include <functional>

namespace cqed {

// Worker count from CQED_THREADS, else hardware concurrency (at least 1).
std::size_t default_threads();

// Calls body(i) for i in [0, n). Each index runs exactly once; the first
// exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

} // namespace cqed
