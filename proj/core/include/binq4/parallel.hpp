#ifndef BINQ4_PARALLEL_HPP
#define BINQ4_PARALLEL_HPP

#include <functional>

namespace binq4 {

/// Worker cap: the BINQ4_THREADS environment variable when set and positive,
/// otherwise the hardware concurrency (at least 1).
int thread_budget();

/// Runs fn(chunk) for chunk in [0, chunks) on up to thread_budget() threads.
/// Callers index results by chunk to keep merges deterministic. Exceptions
/// from workers are rethrown on the calling thread.
void parallel_for(long chunks, const std::function<void(long)>& fn);

} // namespace binq4

#endif
