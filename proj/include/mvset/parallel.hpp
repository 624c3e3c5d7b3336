#pragma once

#include <cstddef>
#include <functional>

namespace mvset {

/// Worker cap from MVSET_THREADS (unset or 0: hardware concurrency).
unsigned thread_budget();

/// Runs body(i) for i in [0, n) on up to thread_budget() threads. Each index
/// runs exactly once; the first exception thrown is rethrown after all
/// workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mvset
