#pragma once

#include <cstddef>
#include <functional>

namespace kp {

// Process-wide cap on worker threads (set from the CLI --threads flag).
// 0 means "use hardware concurrency".
void set_max_threads(unsigned n);
unsigned max_threads();

// Runs fn(i) for i in [0, n) on up to max_threads() workers with a static
// block partition. Results must be written to disjoint, preallocated slots;
// reductions are performed by the caller afterwards in index order, which
// keeps every run bit-deterministic regardless of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace kp
