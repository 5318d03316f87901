#pragma once

#include <cstddef>
#include <functional>

namespace superlattice {

// Worker count used when a caller passes 0. Reads SUPERLATTICE_THREADS once,
// falling back to std::thread::hardware_concurrency().
unsigned default_thread_count();

// Runs body(begin, end) over disjoint contiguous chunks of [0, count).
// Chunk boundaries depend only on count and threads, so results that are
// written per index never depend on scheduling.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace superlattice
