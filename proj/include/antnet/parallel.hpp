#pragma once

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace antnet {

// Every parallel kernel in this project keeps a serial reference path; tests
// assert both produce identical output and the bench target times them.
enum class ExecMode { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
  if (const char* env = std::getenv("ANTNET_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace antnet
