// parallel.hpp -- OpenMP helpers. Every parallel kernel in the project is a
// map over independent items whose results land in preallocated slots, so
// serial and parallel execution produce bit-identical output; reductions
// happen serially in index order afterwards.
#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ampere {

enum class RunMode { Serial, Parallel };

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Maps fn over [0, n). In parallel mode the iterations are distributed over
// OpenMP threads; fn must only write to its own slot.
template <typename Fn>
void parallel_for(std::size_t n, RunMode mode, Fn&& fn) {
#ifdef _OPENMP
  if (mode == RunMode::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      fn(static_cast<std::size_t>(i));
    }
    return;
  }
#else
  (void)mode;
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace ampere
