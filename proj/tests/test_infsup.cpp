#include <doctest.h>

#include <cmath>

#include "mheat/infsup.hpp"

using namespace mheat;

TEST_SUITE("infsup") {

TEST_CASE("1d heat cylinder: positive inf-sup, tight continuity") {
  const InfSupResult res = infsup_estimate_interval1d(16, 16);
  CHECK(res.unknowns == 256);
  CHECK(res.sigma_min > 0.0);
  CHECK(res.sigma_max <= res.continuity_bound * (1.0 + 1e-10));
  CHECK(res.sigma_max >= 0.9 * res.continuity_bound);
  CHECK(res.gamma_a > 0.0);
  CHECK(res.gamma_a <= 1.0);  // the gradient form never exceeds the H norm
}

TEST_CASE("1d refinement degrades sigma_min slowly") {
  const InfSupResult lvl1 = infsup_estimate_interval1d(16, 16);
  const InfSupResult lvl2 = infsup_estimate_interval1d(32, 32);
  CHECK(lvl2.sigma_min > 0.5 * lvl1.sigma_min);
}

TEST_CASE("coarse split2d problem") {
  const LevelSetField field = make_scenario_windowed("split2d", 1.0);
  const InfSupResult res = infsup_estimate(field, BackgroundGrid(2, 1.0, 17), 6);
  CHECK(res.unknowns > 0);
  CHECK(res.unknowns <= 4000);
  CHECK(res.sigma_min > 0.0);
  CHECK(res.sigma_max <= res.continuity_bound * 1.1);
}

TEST_CASE("dense cap is enforced") {
  CHECK_THROWS_AS(infsup_estimate_interval1d(128, 64), argument_error);
  const LevelSetField field = make_scenario_windowed("split2d", 1.0);
  CHECK_THROWS_AS(infsup_estimate(field, BackgroundGrid(2, 1.0, 65), 64, 1000),
                  argument_error);
}

}  // TEST_SUITE
