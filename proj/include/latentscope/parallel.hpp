#pragma once

#include <cstddef>
#include <functional>

namespace latentscope {

// 0 means "use all hardware threads".
std::size_t resolve_threads(std::size_t requested);

// Runs fn(task) for task = 0..n_tasks-1 on up to `threads` worker threads.
// Tasks are handed out through an atomic counter; the partitioning of work
// into tasks is the caller's responsibility and must not depend on the
// thread count, so that results stay identical for any degree of
// parallelism. Exceptions from tasks are rethrown on the calling thread.
void parallel_for(std::size_t n_tasks, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace latentscope
