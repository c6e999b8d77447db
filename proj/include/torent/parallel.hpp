#pragma once

#include <cstddef>
#include <functional>

namespace torent {

/// Runs body(i) for i in [0, count) across `threads` workers (strided
/// assignment). Each index is processed exactly once no matter the worker
/// count, so deterministic bodies give schedule-independent results.
/// threads <= 1 runs inline. Exceptions are captured and rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace torent
