#pragma once

#include <functional>

namespace linres {

// Number of workers actually used for `count` independent cells when the
// user asked for `requested` (0 = hardware concurrency).
int resolve_thread_count(int requested, long count);

// Runs fn(0) .. fn(count-1) on up to `threads` workers. Scheduling is
// dynamic, so fn must write only to its own cell's slot; determinism then
// comes from indexing, not from scheduling. The first exception thrown by
// any worker is rethrown here after all workers have stopped.
void parallel_for(int threads, long count,
                  const std::function<void(long)>& fn);

}  // namespace linres
