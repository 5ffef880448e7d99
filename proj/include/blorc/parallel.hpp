#pragma once

#include <cstddef>
#include <functional>

namespace blorc {

// Worker cap used by every parallel loop in the library. 0 (the default)
// means std::thread::hardware_concurrency().
void set_max_threads(unsigned threads);
unsigned max_threads();

// Runs body(i) for i in [0, count) on up to max_threads() threads. Each index
// is visited exactly once; results must be written to per-index slots so the
// outcome does not depend on scheduling. The first exception thrown by any
// body is rethrown on the calling thread after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace blorc
