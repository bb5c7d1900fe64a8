#pragma once

namespace acs {

// Execution policy for the data-parallel kernels (projection fills, kernel
// matrices, score scans). Every kernel computes each output element by the
// same serial expression under either policy, so results are bitwise
// identical; `serial` is the reference path kept for tests and benchmarks.
enum class Exec { serial, parallel };

// Runs fn(i) for i in [0, n). Under Exec::parallel the iterations are
// distributed over OpenMP threads; fn must write only to its own index.
template <class F>
inline void for_each_index(int n, Exec policy, F&& fn) {
  if (policy == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i) fn(i);
  } else {
    for (int i = 0; i < n; ++i) fn(i);
  }
}

}  // namespace acs
