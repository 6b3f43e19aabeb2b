#pragma once

#include <cstddef>
#include <functional>

namespace folcalc {

// Worker count from FOLCALC_THREADS, else the hardware concurrency (at least 1).
int default_threads();

// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace folcalc
