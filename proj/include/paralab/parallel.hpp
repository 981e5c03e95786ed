#pragma once

#include <functional>

namespace paralab {

// Worker count used by the library; defaults to hardware concurrency.
void set_threads(int k);
int threads();

// Runs body(i) for i in [0, n) over threads() workers. Indices are handed out
// in contiguous chunks, so results written per index are independent of the
// worker count. The first exception thrown by a worker is rethrown.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace paralab
