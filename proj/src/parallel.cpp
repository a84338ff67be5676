#include "sc/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sc {

#ifdef _OPENMP
namespace {
// Captured at startup, before any set_worker_count() call can change it.
const int g_default_threads = omp_get_max_threads();
}  // namespace

void set_worker_count(int n) {
    omp_set_num_threads(n > 0 ? n : g_default_threads);
}

int worker_count() {
    return omp_get_max_threads();
}
#else
void set_worker_count(int) {}
int worker_count() { return 1; }
#endif

}  // namespace sc
