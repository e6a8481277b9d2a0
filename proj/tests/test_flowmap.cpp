#include <doctest.h>

#include <cmath>
#include <random>

#include "mheat/errors.hpp"
#include "mheat/flowmap.hpp"

using namespace mheat;

TEST_SUITE("flowmap") {

TEST_CASE("velocity field examples") {
  const LevelSetField disk = make_normal_form(2, 0, -1);  // |x|^2 - t
  const Vec v1 = velocity_field(disk, vec2(1.0, 0.0), 1.0);
  CHECK(v1[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v1[1] == doctest::Approx(0.0));

  // Interior point: grad phi = 0 makes the numerator vanish.
  const Vec v2 = velocity_field(disk, vec2(0.0, 0.0), 1.0);
  CHECK(v2[0] == 0.0);
  CHECK(v2[1] == 0.0);

  // On Gamma(t) the flow velocity equals the normal velocity.
  const LevelSetField saddle = make_normal_form(2, 1, 1);
  const Vec v3 = velocity_field(saddle, vec2(1.0, 1.0), 0.0);
  CHECK(v3[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(v3[1] == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("velocity denominator degeneracy") {
  const LevelSetField f = make_normal_form(2, 1, 1);
  CHECK_THROWS_AS(velocity_field(f, vec2(0.0, 0.0), 0.0), degenerate_point_error);
}

TEST_CASE("boundary point tracks the shrinking-disk radius") {
  const LevelSetField disk = make_normal_form(2, 0, -1);
  const Trajectory traj = advect(disk, vec2(1.0, 0.0), 1.0, 0.25, 400);
  REQUIRE(traj.times.size() == 401);
  const Vec end = traj.points.back();
  CHECK(end[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(std::abs(end[1]) < 1e-12);
  CHECK(traj.max_boundary_drift < 1e-10);
  CHECK_FALSE(traj.truncated);
}

TEST_CASE("degenerate span and step count are rejected") {
  const LevelSetField disk = make_normal_form(2, 0, -1);
  CHECK_THROWS_AS(advect(disk, vec2(1.0, 0.0), 1.0, 1.0, 1), argument_error);
  CHECK_THROWS_AS(advect(disk, vec2(1.0, 0.0), 1.0, 0.5, 0), argument_error);
}

TEST_CASE("interior symmetry point stays put") {
  const LevelSetField disk = make_normal_form(2, 0, -1);
  const Trajectory traj = advect(disk, vec2(0.0, 0.0), 1.0, 0.5, 50);
  for (const Vec& p : traj.points) {
    CHECK(p[0] == 0.0);
    CHECK(p[1] == 0.0);
  }
}

TEST_CASE("boundary invariance improves at fourth order") {
  // Saddle boundary seed, integrated away from the critical point.
  const LevelSetField f = make_normal_form(2, 1, 1);
  const Vec seed = vec2(1.0, std::sqrt(2.0));  // phi(seed, -1) = 0
  double drift_prev = 0.0;
  std::vector<double> drifts;
  for (int n : {10, 20, 40}) {
    const Trajectory traj = advect(f, seed, -1.0, -0.2, n);
    drifts.push_back(traj.max_boundary_drift);
  }
  CHECK(drifts[0] > 0.0);
  const double order1 = std::log2(drifts[0] / drifts[1]);
  const double order2 = std::log2(drifts[1] / drifts[2]);
  CHECK(order1 >= 3.8);
  CHECK(order2 >= 3.8);
  (void)drift_prev;
}

TEST_CASE("endpoint error converges at RK4 order") {
  const LevelSetField f = make_normal_form(2, 1, 1);
  const Vec seed = vec2(0.9, 1.1);
  const Trajectory ref = advect(f, seed, -1.0, -0.2, 4000);
  const Vec xref = ref.points.back();
  std::vector<double> errs;
  for (int n : {10, 20, 40}) {
    const Trajectory traj = advect(f, seed, -1.0, -0.2, n);
    errs.push_back(dist(traj.points.back(), xref, 2));
  }
  CHECK(std::log2(errs[0] / errs[1]) >= 3.8);
  CHECK(std::log2(errs[1] / errs[2]) >= 3.8);
}

TEST_CASE("interior seeds keep phi negative away from the critical time") {
  const LevelSetField f = make_normal_form(2, 1, 1);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  int tested = 0;
  while (tested < 25) {
    const Vec y = vec2(uni(rng), uni(rng));
    if (f.eval(y, -1.0) >= -0.1) continue;  // want seeds with phi < -delta
    ++tested;
    const Trajectory traj = advect(f, y, -1.0, -0.05, 100);
    for (std::size_t s = 0; s < traj.times.size(); ++s)
      CHECK(f.eval(traj.points[s], traj.times[s]) < 0.0);
  }
}

TEST_CASE("trajectories passing a guarded point are truncated and flagged") {
  // The radial trajectory r(t) = sqrt(t) passes through (0.5, 0) at t = 0.25;
  // guard that space-time point and watch the integration stop there.
  const LevelSetField disk = make_normal_form(2, 0, -1);
  CriticalPoint cp;
  cp.x = vec2(0.5, 0.0);
  cp.t = 0.25;
  const std::vector<CriticalPoint> avoid = {cp};
  const Trajectory traj = advect(disk, vec2(1.0, 0.0), 1.0, 0.1, 2000, avoid);
  CHECK(traj.truncated);
  CHECK(traj.times.size() < 2001);
  CHECK(traj.times.back() > 0.2);  // stopped near the guarded time
  // Without the guard the same span integrates to completion.
  CHECK_FALSE(advect(disk, vec2(1.0, 0.0), 1.0, 0.1, 2000).truncated);
}

}  // TEST_SUITE
