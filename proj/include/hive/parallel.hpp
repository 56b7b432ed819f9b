#pragma once

#include <cstddef>
#include <functional>

namespace hive {

/// Worker count: HIVE_THREADS if set to a positive integer, else the hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, n) on a bounded pool. Results must be written by
// index; the first exception thrown by any task is rethrown after all
// workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int workers = 0);

} // namespace hive
