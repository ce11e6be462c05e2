#pragma once

// Static-partition parallel loop. Each index is processed exactly once and
// writes only its own slot, so results do not depend on the thread count.

#include <cstddef>
#include <functional>

namespace besselforge {

/// requested > 0 wins; otherwise BESSELFORGE_THREADS; otherwise the hardware count.
unsigned resolve_threads(int requested = 0);

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace besselforge
