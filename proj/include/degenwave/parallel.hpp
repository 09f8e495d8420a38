#pragma once

#include <cstddef>
#include <functional>

namespace degenwave {

// Hardware threads, capped by DEGENWAVE_THREADS when set and positive.
std::size_t worker_count();

// Runs fn(i) for i in [0, count) over at most worker_count() threads. Each
// index is handled exactly once; callers write results into slot i so the
// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace degenwave
