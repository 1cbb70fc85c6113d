#pragma once

#include <cstddef>
#include <functional>

namespace fraclps {

/// Worker cap: FRACLPS_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(begin, end) over a static partition of [0, n). Each index is
/// visited exactly once; callers write to disjoint slots, so results do not
/// depend on the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace fraclps
