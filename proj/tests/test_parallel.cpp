#include <doctest.h>

#include <cmath>
#include <random>

#include "mheat/fdop.hpp"
#include "mheat/parallel.hpp"
#include "mheat/slice.hpp"

using namespace mheat;

TEST_SUITE("parallel") {

TEST_CASE("reductions agree with the serial reference") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> data(100003);
  for (double& v : data) v = uni(rng);
  auto term = [&](i64 i) { return data[static_cast<std::size_t>(i)]; };
  const double s_seq = reduce_sum(Exec::seq, static_cast<i64>(data.size()), term);
  const double s_par = reduce_sum(Exec::par, static_cast<i64>(data.size()), term);
  CHECK(s_par == doctest::Approx(s_seq).epsilon(1e-12));
  CHECK(reduce_min(Exec::par, static_cast<i64>(data.size()), 1e300, term) ==
        reduce_min(Exec::seq, static_cast<i64>(data.size()), 1e300, term));
  CHECK(reduce_max(Exec::par, static_cast<i64>(data.size()), -1e300, term) ==
        reduce_max(Exec::seq, static_cast<i64>(data.size()), -1e300, term));
}

TEST_CASE("parallel reductions are reproducible run to run") {
  std::vector<double> data(54321);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (double& v : data) v = uni(rng);
  auto term = [&](i64 i) { return data[static_cast<std::size_t>(i)]; };
  const double first = reduce_sum(Exec::par, static_cast<i64>(data.size()), term);
  for (int rep = 0; rep < 5; ++rep)
    CHECK(reduce_sum(Exec::par, static_cast<i64>(data.size()), term) == first);
}

TEST_CASE("slice kernels: parallel output matches the serial reference") {
  const LevelSetField f = make_scenario_windowed("split2d", 1.0);
  const BackgroundGrid grid(2, 1.0, 257);
  const DomainSlice seq = build_slice(f, grid, 0.2, Exec::seq);
  const DomainSlice par = build_slice(f, grid, 0.2, Exec::par);
  CHECK(seq.num_active == par.num_active);
  CHECK(seq.active == par.active);
  CHECK(seq.weight == par.weight);
  CHECK(seq.num_components == par.num_components);
  REQUIRE(seq.facets.size() == par.facets.size());
  CHECK(seq.volume == doctest::Approx(par.volume).epsilon(1e-13));
  CHECK(seq.boundary_measure == doctest::Approx(par.boundary_measure).epsilon(1e-13));
}

TEST_CASE("quadrature: parallel matches serial") {
  const LevelSetField f = make_scenario_windowed("merge2d", 1.0);
  const DomainSlice s = build_slice(f, BackgroundGrid(2, 1.0, 257), -0.2);
  auto g = [](const Vec& x) { return std::cos(3.0 * x[0]) + x[1]; };
  CHECK(volume_integral(s, g, Exec::par) ==
        doctest::Approx(volume_integral(s, g, Exec::seq)).epsilon(1e-13));
  CHECK(boundary_integral(s, g, Exec::par) ==
        doctest::Approx(boundary_integral(s, g, Exec::seq)).epsilon(1e-13));
}

TEST_CASE("spmv rows are computed identically in both paths") {
  const LevelSetField f = make_scenario_windowed("split2d", 1.0);
  const DomainSlice s = build_slice(f, BackgroundGrid(2, 1.0, 257), 0.3);
  const SliceOperators ops = assemble_operators(s, true);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> x(ops.nodes.size());
  for (double& v : x) v = uni(rng);
  std::vector<double> y_seq, y_par;
  spmv(ops.stiffness, x, y_seq, Exec::seq);
  spmv(ops.stiffness, x, y_par, Exec::par);
  CHECK(y_seq == y_par);  // row-parallel: bitwise identical
}

TEST_CASE("cg solve: both paths solve the same system") {
  const LevelSetField f = make_scenario_windowed("split2d", 1.0);
  const DomainSlice s = build_slice(f, BackgroundGrid(2, 1.0, 65), 0.3);
  const SliceOperators ops = assemble_operators(s, true);
  std::vector<double> b(ops.nodes.size(), 1.0);
  const auto x_seq = cg_solve(ops.stiffness, ops.mass, b, 1e-12, 20000, Exec::seq);
  const auto x_par = cg_solve(ops.stiffness, ops.mass, b, 1e-12, 20000, Exec::par);
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    diff = std::max(diff, std::abs(x_seq[i] - x_par[i]));
    scale = std::max(scale, std::abs(x_seq[i]));
  }
  CHECK(diff <= 1e-9 * scale);
}

}  // TEST_SUITE
