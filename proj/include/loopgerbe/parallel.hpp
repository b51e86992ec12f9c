#pragma once

#include <cstddef>
#include <functional>

namespace loopgerbe {

/// Worker count: hardware concurrency capped by LOOPGERBE_THREADS (if set).
int thread_count();
/// Override for the current process (0 restores the default).
void set_thread_count(int n);

/// Runs body(i) for i in [0, n). Callers write into per-index slots and
/// reduce afterwards in index order, which keeps results bit-reproducible.
/// The first exception thrown (lowest index) is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace loopgerbe
