#include "vlslab/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vlslab {

namespace {
int g_thread_override = 0;
}

void set_max_threads(int n) {
    g_thread_override = n > 0 ? n : 0;
#ifdef _OPENMP
    static const int initial_default = omp_get_max_threads();
    omp_set_num_threads(n > 0 ? n : initial_default);
#endif
}

int max_threads() {
#ifdef _OPENMP
    if (g_thread_override > 0) return g_thread_override;
    return omp_get_max_threads();
#else
    return 1;
#endif
}

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

} // namespace vlslab
