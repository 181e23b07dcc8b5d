#pragma once

#include <cstddef>
#include <functional>

namespace wfkdv {

/// requested > 0 wins; otherwise WAVEFRONT_KDV_THREADS, otherwise the hardware concurrency.
unsigned resolve_thread_count(int requested = 0);

/// Runs body(i) for i in [0, n) on up to `threads` workers. The first exception is rethrown
/// after all workers finish.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace wfkdv
