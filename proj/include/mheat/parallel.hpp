#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mheat {

// Execution policy for the hot kernels. Every parallel kernel has a serial
// twin (Exec::seq) that is kept as the reference implementation for tests
// and for the benchmark target.
enum class Exec { seq, par };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

namespace detail {
inline void chunk_range(std::int64_t n, int nt, int t, std::int64_t& lo, std::int64_t& hi) {
  const std::int64_t chunk = (n + nt - 1) / nt;
  lo = std::min<std::int64_t>(n, t * chunk);
  hi = std::min<std::int64_t>(n, lo + chunk);
}
// Below this many elements the fork/join cost of an OpenMP region outweighs
// the work (measured on the Krylov kernels), so the helpers stay serial.
inline constexpr std::int64_t kGrain = 16384;
}  // namespace detail

template <class F>
void parallel_for(Exec exec, std::int64_t n, F&& body) {
  if (exec == Exec::seq || n < detail::kGrain || max_threads() == 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) body(i);
#else
  for (std::int64_t i = 0; i < n; ++i) body(i);
#endif
}

// Sum of term(i) for i in [0, n). The parallel path accumulates per-thread
// partials over fixed contiguous chunks and folds them in thread order, so
// the result is reproducible for a fixed thread count.
template <class F>
double reduce_sum(Exec exec, std::int64_t n, F&& term) {
  if (exec == Exec::seq || n < detail::kGrain || max_threads() == 1) {
    double s = 0.0;
    for (std::int64_t i = 0; i < n; ++i) s += term(i);
    return s;
  }
  const int nt = max_threads();
  std::vector<double> partial(static_cast<std::size_t>(nt), 0.0);
#ifdef _OPENMP
#pragma omp parallel num_threads(nt)
  {
    const int t = omp_get_thread_num();
    std::int64_t lo, hi;
    detail::chunk_range(n, nt, t, lo, hi);
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(t)] = s;
  }
#endif
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

template <class F>
double reduce_min(Exec exec, std::int64_t n, double init, F&& term) {
  if (exec == Exec::seq || n < detail::kGrain || max_threads() == 1) {
    double m = init;
    for (std::int64_t i = 0; i < n; ++i) m = std::min(m, term(i));
    return m;
  }
  const int nt = max_threads();
  std::vector<double> partial(static_cast<std::size_t>(nt), init);
#ifdef _OPENMP
#pragma omp parallel num_threads(nt)
  {
    const int t = omp_get_thread_num();
    std::int64_t lo, hi;
    detail::chunk_range(n, nt, t, lo, hi);
    double m = init;
    for (std::int64_t i = lo; i < hi; ++i) m = std::min(m, term(i));
    partial[static_cast<std::size_t>(t)] = m;
  }
#endif
  double m = init;
  for (double p : partial) m = std::min(m, p);
  return m;
}

template <class F>
double reduce_max(Exec exec, std::int64_t n, double init, F&& term) {
  return -reduce_min(exec, n, -init, [&](std::int64_t i) { return -term(i); });
}

}  // namespace mheat
