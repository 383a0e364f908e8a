#pragma once

#include <functional>

namespace lfdepth {

// 0 restores the hardware default.
void set_num_threads(int n);
int num_threads();

// Calls fn(i) for i in [begin, end), split into contiguous chunks, one chunk
// per worker. Chunk boundaries depend only on the range and worker count, so
// callers that keep per-index writes disjoint get identical results at any
// thread count.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace lfdepth
