#pragma once

#include <cstddef>
#include <functional>

namespace implicitpoly {

// Number of worker threads to use: `requested`, or hardware concurrency
// when `requested` is 0 (IMPLICITPOLY_THREADS overrides the hardware count).
unsigned resolve_threads(unsigned requested);

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each item must
// write only to its own slot so results do not depend on the thread count.
// If any item throws, the exception of the lowest-index failing item is
// rethrown after all workers have joined.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

} // namespace implicitpoly
