#pragma once

#include <cstddef>
#include <functional>

namespace mmuplink {

/// Worker count: MMUPLINK_THREADS when set, else the hardware concurrency.
unsigned default_threads();

/// Calls fn(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Work items are claimed dynamically; fn must be safe to run concurrently.
/// The first exception thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

} // namespace mmuplink
