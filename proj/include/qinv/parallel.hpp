#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qinv::par {

/* 0 = library default (OpenMP decides), 1 = serial reference path. */
void set_thread_count(int n);
int thread_count();

bool serial();

/* Data-parallel sweep over [0, n).  Iterations must touch disjoint state;
   results are merged by the caller in index order, so the parallel path is
   bit-identical to the serial reference. */
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
#ifdef _OPENMP
    if (!serial() && n > 1) {
        const int req = thread_count();
#pragma omp parallel for schedule(dynamic) num_threads(req > 0 ? req : omp_get_max_threads())
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            fn(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i)
        fn(i);
}

}  // namespace qinv::par
