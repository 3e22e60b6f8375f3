#pragma once

#include <functional>

namespace oscint {

// OSCINT_THREADS if set and positive, else the hardware concurrency (at least 1).
int default_threads();

// Runs fn(0..n-1) on up to `threads` workers (0 selects default_threads()).
// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace oscint
