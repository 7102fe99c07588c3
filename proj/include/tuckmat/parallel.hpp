#pragma once

#include <cstddef>
#include <functional>

namespace tuckmat {

// Runs fn(i) for i in [0, n). workers <= 1 executes inline in index order;
// otherwise an atomic work queue feeds `workers` threads. The first
// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

// Worker-count resolution used by the CLI: explicit flag value if > 0, else
// the TUCKMAT_WORKERS environment variable, else hardware concurrency.
int resolve_workers(int requested);

} // namespace tuckmat
