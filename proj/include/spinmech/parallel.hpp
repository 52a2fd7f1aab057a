// Deterministic index-ordered parallel map over [0, n).
#pragma once

#include <cstddef>
#include <functional>

namespace spinmech {

// Runs fn(i) for i in [0, n) on up to n_threads workers in contiguous chunks.
// Results must be written by index by the caller; chunking keeps any order of
// side effects deterministic per index. n_threads <= 1 runs inline.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned n_threads = 0);

// Worker count used when n_threads == 0 (hardware concurrency, at least 1).
unsigned default_thread_count();

} // namespace spinmech
