#ifndef MONAS_PARALLEL_HPP
#define MONAS_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace monas {

/// Number of workers used when a caller passes workers == 0.
/// Resolution order: MONAS_WORKERS env var, then hardware concurrency.
int default_workers();

/// Runs fn(i) for i in [0, n). Results must be written by index; the
/// iteration order is unspecified but every index runs exactly once.
/// Nested calls degrade to sequential execution, so outputs never depend
/// on scheduling. Exceptions are captured and rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int workers = 0);

} // namespace monas

#endif
