#pragma once

#include <cstddef>
#include <functional>

namespace wmark {

/// Worker count: WMARK_THREADS if set (>= 1), otherwise the hardware count.
int default_threads();

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index runs
/// exactly once; callers write into index-addressed slots so the result
/// does not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads);

}  // namespace wmark
