#include "boolkern/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace boolkern {

namespace {
#ifdef _OPENMP
const int kDefaultWorkers = omp_get_max_threads();
#endif
}  // namespace

void set_worker_count(int workers) {
#ifdef _OPENMP
    omp_set_num_threads(workers > 0 ? workers : kDefaultWorkers);
#else
    (void)workers;
#endif
}

int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace boolkern
