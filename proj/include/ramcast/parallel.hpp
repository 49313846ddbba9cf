#pragma once

#include <cstddef>
#include <functional>

namespace ramcast {

// 0 means one worker per hardware thread.
unsigned resolve_jobs(unsigned jobs);

/// Calls fn(i) for i in [0, count) on up to `jobs` threads. The first
/// exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace ramcast
