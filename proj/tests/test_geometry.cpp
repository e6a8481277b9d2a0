#include <doctest.h>

#include <cmath>

#include "mheat/slice.hpp"

using namespace mheat;

namespace {

const double kPi = std::acos(-1.0);

LevelSetField circle_field(double r2) {
  return make_analytic_field(
      2, -1.0, 1.0,
      [r2](const Vec& x, double) { return x[0] * x[0] + x[1] * x[1] - r2; },
      [](const Vec& x, double) { return vec2(2.0 * x[0], 2.0 * x[1]); },
      [](const Vec&, double) {
        Mat h{};
        h[0][0] = h[1][1] = 2.0;
        return h;
      },
      [](const Vec&, double) { return 0.0; });
}

LevelSetField sphere_field(double r2) {
  return make_analytic_field(
      3, -1.0, 1.0,
      [r2](const Vec& x, double) {
        return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - r2;
      },
      [](const Vec& x, double) { return vec3(2.0 * x[0], 2.0 * x[1], 2.0 * x[2]); },
      [](const Vec&, double) {
        Mat h{};
        h[0][0] = h[1][1] = h[2][2] = 2.0;
        return h;
      },
      [](const Vec&, double) { return 0.0; });
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("unit disk: measure, boundary length, components") {
  const DomainSlice slice = build_slice(circle_field(1.0), BackgroundGrid(2, 2.0, 201), 0.0);
  CHECK(std::abs(slice.volume - kPi) < 1e-3);
  CHECK(std::abs(slice.boundary_measure - 2.0 * kPi) < 1e-3);
  CHECK(slice.num_components == 1);
  CHECK(connected_components(slice) == 1);
}

TEST_CASE("disk measures converge at second order") {
  // Radius sqrt(t) for several t incommensurate with the grid, so the order
  // estimate is not polluted by node-alignment luck at single radii.
  const LevelSetField shrink = make_normal_form(2, 0, -1);
  const std::vector<double> ts = {0.29, 0.43, 0.57, 0.71, 0.85};
  std::vector<double> verr, perr;
  for (int n : {51, 101, 201}) {
    double ve = 0.0, pe = 0.0;
    for (double t : ts) {
      const DomainSlice s = build_slice(shrink, BackgroundGrid(2, 1.2, n), t);
      ve += std::abs(s.volume - kPi * t);
      pe += std::abs(s.boundary_measure - 2.0 * kPi * std::sqrt(t));
    }
    verr.push_back(ve);
    perr.push_back(pe);
  }
  CHECK(std::log2(verr[0] / verr[1]) >= 1.9);
  CHECK(std::log2(verr[1] / verr[2]) >= 1.9);
  CHECK(std::log2(perr[0] / perr[1]) >= 1.9);
  CHECK(std::log2(perr[1] / perr[2]) >= 1.9);
}

TEST_CASE("unit ball in 3d: volume and surface area") {
  const DomainSlice s = build_slice(sphere_field(1.0), BackgroundGrid(3, 1.5, 65), 0.0);
  CHECK(std::abs(s.volume - 4.0 * kPi / 3.0) / (4.0 * kPi / 3.0) < 0.01);
  CHECK(std::abs(s.boundary_measure - 4.0 * kPi) / (4.0 * kPi) < 0.01);
  CHECK(s.num_components == 1);
}

TEST_CASE("facet vertices sit on the zero level") {
  for (const auto* name : {"split2d", "hole2d-create"}) {
    const LevelSetField f = make_scenario_windowed(name, 1.0);
    const DomainSlice s = build_slice(f, BackgroundGrid(2, 1.0, 65), 0.3);
    for (const Facet& fc : s.facets)
      for (int v = 0; v < fc.nv; ++v)
        CHECK(std::abs(f.eval(fc.v[static_cast<std::size_t>(v)], s.time)) < 1e-8);
  }
  const LevelSetField f3 = make_scenario_windowed("split3d", 1.0);
  const DomainSlice s3 = build_slice(f3, BackgroundGrid(3, 1.0, 33), 0.3);
  REQUIRE(!s3.facets.empty());
  for (const Facet& fc : s3.facets)
    for (int v = 0; v < fc.nv; ++v)
      CHECK(std::abs(f3.eval(fc.v[static_cast<std::size_t>(v)], s3.time)) < 1e-8);
}

TEST_CASE("island creation: empty slice, then a disk of area pi*t") {
  const LevelSetField f = make_scenario_windowed("island2d-create", 1.0);
  const BackgroundGrid grid(2, 1.0, 65);
  const DomainSlice at0 = build_slice(f, grid, 0.0);
  CHECK(at0.num_components <= 1);
  CHECK(at0.volume < 1e-6);
  const DomainSlice at = build_slice(f, grid, 0.25);
  CHECK(at.num_components == 1);
  CHECK(std::abs(at.volume - kPi * 0.25) / (kPi * 0.25) < 0.01);
}

TEST_CASE("empty slice is valid") {
  const LevelSetField f = make_scenario("island2d-create");  // |x|^2 - t before t=0
  LevelSetField early = f;
  early.t_begin = -1.0;
  const DomainSlice s = build_slice(early, BackgroundGrid(2, 1.0, 33), -0.5);
  CHECK(s.empty());
  CHECK(s.num_components == 0);
  CHECK(s.volume == 0.0);
  CHECK(s.facets.empty());
  CHECK(bounded_complement_components(s) == 0);
}

TEST_CASE("merge scenario component counts") {
  const LevelSetField f = make_scenario_windowed("merge2d", 1.0);
  const BackgroundGrid grid(2, 1.0, 65);
  CHECK(build_slice(f, grid, -0.25).num_components == 2);
  CHECK(build_slice(f, grid, 0.25).num_components == 1);
}

TEST_CASE("component labels partition the active set deterministically") {
  const LevelSetField f = make_scenario_windowed("merge2d", 1.0);
  const DomainSlice s = build_slice(f, BackgroundGrid(2, 1.0, 65), -0.25);
  REQUIRE(s.num_components == 2);
  int first_label = -2;
  for (i64 idx = 0; idx < s.grid.num_nodes(); ++idx) {
    const bool active = s.active[static_cast<std::size_t>(idx)] != 0;
    const int label = s.component[static_cast<std::size_t>(idx)];
    CHECK((active ? label >= 0 && label < 2 : label == -1));
    if (active && first_label == -2) first_label = label;
  }
  CHECK(first_label == 0);  // lowest node index carries the lowest label
}

TEST_CASE("void scenario has a bounded complement component") {
  const LevelSetField f = make_scenario_windowed("void3d-create", 1.0);
  const BackgroundGrid grid(3, 1.0, 33);
  CHECK(bounded_complement_components(build_slice(f, grid, 0.25)) == 1);
  CHECK(bounded_complement_components(build_slice(f, grid, -0.25)) == 0);
}

TEST_CASE("volume integral: cut-cell nodal rule") {
  const DomainSlice s = build_slice(circle_field(1.0), BackgroundGrid(2, 2.0, 201), 0.0);
  const double one = volume_integral(s, [](const Vec&) { return 1.0; });
  CHECK(std::abs(one - kPi) / kPi < 1e-2);  // first-order rule: percent level
  const double odd = volume_integral(s, [](const Vec& x) { return x[0]; });
  CHECK(std::abs(odd) < 1e-3);
  const double zero = volume_integral(s, [](const Vec&) { return 0.0; });
  CHECK(zero == 0.0);
}

TEST_CASE("boundary integral: circumference and odd symmetry") {
  const DomainSlice s = build_slice(circle_field(1.0), BackgroundGrid(2, 2.0, 201), 0.0);
  CHECK(std::abs(boundary_integral(s, [](const Vec&) { return 1.0; }) - 2.0 * kPi) < 1e-3);
  CHECK(std::abs(boundary_integral(s, [](const Vec& x) { return x[1]; })) < 1e-3);
  // Shrinking-disk circumference scaling: 2 pi sqrt(t).
  const LevelSetField shrink = make_normal_form(2, 0, -1);
  const DomainSlice st = build_slice(shrink, BackgroundGrid(2, 1.0, 201), 0.49);
  CHECK(std::abs(boundary_integral(st, [](const Vec&) { return 1.0; }) - 2.0 * kPi * 0.7) <
        1e-2);
}

TEST_CASE("cut weights: interior nodes carry full h^d") {
  const DomainSlice s = build_slice(circle_field(1.0), BackgroundGrid(2, 2.0, 101), 0.0);
  const double hd = s.grid.h() * s.grid.h();
  const i64 center = s.grid.index(50, 50);
  CHECK(s.active[static_cast<std::size_t>(center)] == 1);
  CHECK(s.weight[static_cast<std::size_t>(center)] == hd);
  // Weights vanish exactly on inactive nodes.
  const i64 corner = s.grid.index(0, 0);
  CHECK(s.active[static_cast<std::size_t>(corner)] == 0);
  CHECK(s.weight[static_cast<std::size_t>(corner)] == 0.0);
}

}  // TEST_SUITE
