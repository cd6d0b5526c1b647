#pragma once

#ifdef _OPENMP
#include <omp.h>
#else
inline int omp_get_thread_num() { return 0; }
inline int omp_get_max_threads() { return 1; }
#endif

namespace mildstokes {

// Numeric kernels (ray evaluation, contour quadrature, certification fits)
// are embarrassingly parallel over sample points.  Every kernel ships in two
// variants: a plain serial loop kept as the reference, and an OpenMP loop.
// Results are bitwise identical because each point is computed independently
// and reductions keep a fixed order.
enum class ExecPolicy { Serial, OpenMP };

inline constexpr ExecPolicy kDefaultPolicy =
#ifdef _OPENMP
    ExecPolicy::OpenMP;
#else
    ExecPolicy::Serial;
#endif

}  // namespace mildstokes
