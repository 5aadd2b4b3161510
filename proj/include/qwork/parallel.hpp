#pragma once

#include <cstddef>
#include <functional>

namespace qwork::parallel {

// Runs fn(i) for i in [0, count) on a small worker pool. The pool size is
// min(hardware concurrency, count), capped by the QWORK_THREADS environment
// variable; results must be written to pre-sized slots so assembly order is
// index-determined. The first exception is rethrown on the caller thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

std::size_t worker_count(std::size_t count);

}  // namespace qwork::parallel
