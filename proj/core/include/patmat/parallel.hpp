#pragma once

#include <cstddef>
#include <functional>

namespace patmat {

/// Worker count used when an options struct leaves `threads` at 0: the
/// PATMAT_THREADS environment variable if set, else the hardware concurrency.
unsigned default_thread_count();

unsigned resolve_threads(unsigned requested);

/// Runs `task(i)` for every i in [0, count) on up to `threads` workers.
/// Tasks must write their results into per-index slots; callers merge those
/// slots in index order, which keeps reductions independent of scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace patmat
