#pragma once

#include <cstddef>
#include <functional>

namespace lplab {

/// Worker count: hardware concurrency, capped by LP_LAB_THREADS when set.
/// Never less than 1.
std::size_t thread_count();

/// Override for the current process (0 restores the environment default).
void set_thread_count(std::size_t n);

/// Calls body(i) for i in [0, n). Each index runs exactly once; callers write
/// into preallocated per-index slots so that results do not depend on the
/// schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace lplab
