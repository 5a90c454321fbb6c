#pragma once

#include <cstddef>
#include <functional>

namespace affsob {

// Worker count: AFFSOB_THREADS if set and positive, else hardware concurrency.
int worker_count();

// Calls fn(i) for i in [0, n) across worker_count() threads. Callers write to
// per-index slots and reduce afterwards in index order, so results do not
// depend on the thread count. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace affsob
