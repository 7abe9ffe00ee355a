#pragma once

#include <cstddef>
#include <functional>

namespace wfx {

/// Worker count: hardware concurrency capped by WFX_THREADS when set.
std::size_t worker_count();

/// Runs fn(i) for i in [0, n) on up to worker_count() threads.  Each index is
/// visited exactly once; callers write results by index so the outcome does
/// not depend on scheduling.  The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace wfx
