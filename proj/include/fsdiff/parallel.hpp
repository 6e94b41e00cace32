#pragma once

#include <cstddef>
#include <functional>

namespace fsdiff {

// Resolves a worker count: explicit request, else FS_DIFFUSION_THREADS, else
// hardware concurrency.
int resolve_threads(int requested);

// Runs fn(i) for i in [0, n) on the resolved number of workers.  Work items
// must write to disjoint state; index order is not guaranteed.
void parallel_for(std::size_t n, int n_threads, const std::function<void(std::size_t)>& fn);

}  // namespace fsdiff
