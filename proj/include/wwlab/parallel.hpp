#pragma once

// Deterministic fork-join helper. Work items are indexed; each item writes
// only its own output slot, and callers reduce the slots in index order, so
// results never depend on the number of threads or their scheduling.

#include <cstddef>
#include <functional>

namespace wwlab {

/// Thread cap: set_thread_cap() if called with a nonzero value, else the
/// WWLAB_THREADS environment variable, else hardware concurrency.
std::size_t thread_cap();
void set_thread_cap(std::size_t threads);

/// Runs body(i) for i in [0, count). Exceptions thrown by body are rethrown
/// on the calling thread (the lowest failing index wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace wwlab
