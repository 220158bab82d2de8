#pragma once

// Static-partition parallel loop. Each index is processed exactly once by a
// fixed worker, so results do not depend on the thread count as long as the
// body writes only to its own index.

#include <cstddef>
#include <functional>

namespace arnold {

// Worker count: ARNOLD_STAB_THREADS if set (>= 1), else hardware concurrency.
unsigned thread_count();
void parallel_for(std::size_t n, const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace arnold
