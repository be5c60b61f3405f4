#pragma once

#include <cstddef>
#include <functional>

namespace ergolin {

// Worker count: hardware concurrency, capped by ERGOLIN_THREADS when set.
std::size_t worker_count();

// Runs body(i) for i in [0, count). Work is split into contiguous blocks, so results written
// by index are independent of the thread count. The first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ergolin
