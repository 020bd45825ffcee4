#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace clay {

/// Sets the worker count used by parallel loops. Results never depend on it.
inline void set_thread_count(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

inline int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace clay
