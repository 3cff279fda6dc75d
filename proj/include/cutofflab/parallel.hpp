#pragma once

#include <functional>

namespace cutofflab {

// Worker count: CUTOFFLAB_THREADS if set and positive, else hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, n). Each index is visited exactly once, so callers that
// write results into per-index slots get output independent of the thread count.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace cutofflab
