#pragma once

#include <cstddef>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace forage {

// Serial is the reference path; Parallel must produce bit-identical
// results (workers only write index-addressed slots, never share RNGs).
enum class ExecPolicy { Serial, Parallel };

template <typename Fn>
void for_each_index(std::size_t count, ExecPolicy policy, Fn&& fn) {
#ifdef _OPENMP
    if (policy == ExecPolicy::Parallel && count > 1) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(count); ++i) {
            fn(static_cast<std::size_t>(i));
        }
        return;
    }
#endif
    for (std::size_t i = 0; i < count; ++i) fn(i);
}

inline int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace forage
