// Timing harness for the hot kernels: each one runs through the serial
// reference path and the OpenMP path on the same inputs, and the speedup is
// reported together with the relative difference of the results.
//
// usage: bench_kernels [n2d] [n3d] [reps]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "mheat/fdop.hpp"
#include "mheat/parallel.hpp"
#include "mheat/slice.hpp"

using namespace mheat;

namespace {

using clock_type = std::chrono::steady_clock;

template <class F>
double time_best(int reps, F&& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clock_type::now();
    body();
    const auto t1 = clock_type::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double t_seq, double t_par, double rel_diff) {
  std::printf("%-28s %10.4f ms %10.4f ms %7.2fx   rel.diff %.2e\n", name,
              1e3 * t_seq, 1e3 * t_par, t_seq / t_par, rel_diff);
}

}  // namespace

int main(int argc, char** argv) {
  const int n2d = argc > 1 ? std::atoi(argv[1]) : 513;
  const int n3d = argc > 2 ? std::atoi(argv[2]) : 81;
  const int reps = argc > 3 ? std::atoi(argv[3]) : 5;

  std::printf("threads: %d\n", max_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  const LevelSetField f2 = make_scenario_windowed("split2d", 1.0);
  const LevelSetField f3 = make_scenario_windowed("split3d", 1.0);
  const BackgroundGrid g2(2, 1.0, n2d);
  const BackgroundGrid g3(3, 1.0, n3d);

  {
    DomainSlice s_seq, s_par;
    const double t_seq = time_best(reps, [&] { s_seq = build_slice(f2, g2, 0.2, Exec::seq); });
    const double t_par = time_best(reps, [&] { s_par = build_slice(f2, g2, 0.2, Exec::par); });
    report("build_slice 2d", t_seq, t_par,
           std::abs(s_seq.volume - s_par.volume) / s_seq.volume);
  }
  {
    DomainSlice s_seq, s_par;
    const double t_seq = time_best(reps, [&] { s_seq = build_slice(f3, g3, 0.2, Exec::seq); });
    const double t_par = time_best(reps, [&] { s_par = build_slice(f3, g3, 0.2, Exec::par); });
    report("build_slice 3d", t_seq, t_par,
           std::abs(s_seq.volume - s_par.volume) / s_seq.volume);
  }

  const DomainSlice slice2 = build_slice(f2, g2, 0.2);
  auto integrand = [](const Vec& x) { return std::cos(3.0 * x[0]) + x[1] * x[1]; };
  {
    double v_seq = 0.0, v_par = 0.0;
    const double t_seq =
        time_best(reps, [&] { v_seq = volume_integral(slice2, integrand, Exec::seq); });
    const double t_par =
        time_best(reps, [&] { v_par = volume_integral(slice2, integrand, Exec::par); });
    report("volume_integral 2d", t_seq, t_par, std::abs(v_seq - v_par) / std::abs(v_seq));
  }

  const SliceOperators ops = assemble_operators(slice2, true);
  std::vector<double> x(ops.nodes.size(), 1.0), y_seq, y_par;
  {
    const double t_seq =
        time_best(reps, [&] { spmv(ops.stiffness, x, y_seq, Exec::seq); });
    const double t_par =
        time_best(reps, [&] { spmv(ops.stiffness, x, y_par, Exec::par); });
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < y_seq.size(); ++i) {
      diff = std::max(diff, std::abs(y_seq[i] - y_par[i]));
      scale = std::max(scale, std::abs(y_seq[i]));
    }
    report("spmv (cut laplacian)", t_seq, t_par, diff / scale);
  }
  {
    std::vector<double> b(ops.nodes.size(), 1.0);
    std::vector<double> u_seq, u_par;
    const double t_seq = time_best(
        reps, [&] { u_seq = cg_solve(ops.stiffness, ops.mass, b, 1e-10, 50000, Exec::seq); });
    const double t_par = time_best(
        reps, [&] { u_par = cg_solve(ops.stiffness, ops.mass, b, 1e-10, 50000, Exec::par); });
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < u_seq.size(); ++i) {
      diff = std::max(diff, std::abs(u_seq[i] - u_par[i]));
      scale = std::max(scale, std::abs(u_seq[i]));
    }
    report("cg solve", t_seq, t_par, diff / scale);
  }
  return 0;
}
