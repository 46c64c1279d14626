#pragma once

#include <cstddef>
#include <functional>

namespace ndist {

// Worker count used by parallel_for (defaults to hardware concurrency).
void set_thread_count(int n);
int thread_count();

// Runs body(i) for i in [0, count). Each index is handled exactly once; callers
// write results into per-index slots so the outcome is independent of scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ndist
