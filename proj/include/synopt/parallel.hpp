// SPDX-License-Identifier: Apache-2.0
#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace synopt {

/// Maps a --jobs request to a worker count: 0 means "all hardware
/// threads", anything else is taken literally (floored at 1).
inline int resolve_jobs(int jobs) {
#ifdef _OPENMP
  if (jobs <= 0) return omp_get_max_threads();
  return jobs;
#else
  (void)jobs;
  return 1;
#endif
}

}  // namespace synopt
