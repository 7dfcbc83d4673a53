#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace entrate {

// Every parallel loop in this library maps an index to its own output slot,
// so results are identical regardless of Exec mode or thread count. The
// serial path is the reference implementation the tests compare against.
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <typename Fn>
void for_each_index(std::size_t count, Exec exec, Fn&& fn) {
#ifdef _OPENMP
  if (exec == Exec::Parallel && count > 1) {
    const long long c = static_cast<long long>(count);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < c; ++i) fn(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < count; ++i) fn(i);
}

}  // namespace entrate
