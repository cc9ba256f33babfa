#pragma once

#include <cstddef>
#include <functional>

namespace flatfront {

/// Worker count: FLATFRONT_THREADS if set, else hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; the first
/// exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace flatfront
