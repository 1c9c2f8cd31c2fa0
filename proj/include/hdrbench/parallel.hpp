#pragma once

#include <cstddef>
#include <functional>

namespace hdrbench {

// Runs body(i) for i in [0, count) on up to `threads` workers (0 means
// hardware concurrency). Each index runs exactly once. If any calls throw,
// the exception from the lowest failing index is rethrown after all workers
// finish, so failures are reported the same way regardless of scheduling.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace hdrbench
