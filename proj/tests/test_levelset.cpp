#include <doctest.h>

#include <cmath>
#include <random>

#include "mheat/errors.hpp"
#include "mheat/levelset.hpp"

using namespace mheat;

TEST_SUITE("levelset") {

TEST_CASE("normal forms match their closed forms exactly") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int dim : {2, 3}) {
    for (int q = 0; q <= dim; ++q) {
      for (int s : {1, -1}) {
        const LevelSetField f = make_normal_form(dim, q, s);
        CHECK(f.kind == FieldKind::normal_form);
        for (int trial = 0; trial < 50; ++trial) {
          Vec x{uni(rng), uni(rng), dim == 3 ? uni(rng) : 0.0};
          const double t = uni(rng);
          double want = s * t;
          for (int i = 0; i < dim; ++i) want += (i < q ? -1.0 : 1.0) * x[i] * x[i];
          CHECK(f.eval(x, t) == want);
          const Vec g = f.grad(x, t);
          const Mat h = f.hess(x, t);
          for (int i = 0; i < dim; ++i) {
            CHECK(g[i] == 2.0 * (i < q ? -1.0 : 1.0) * x[i]);
            CHECK(h[i][i] == 2.0 * (i < q ? -1.0 : 1.0));
            for (int j = 0; j < dim; ++j)
              if (i != j) CHECK(h[i][j] == 0.0);
          }
          CHECK(f.dphi_dt(x, t) == double(s));
        }
      }
    }
  }
}

TEST_CASE("normal form direct substitution example") {
  const LevelSetField f = make_normal_form(2, 1, 1);
  CHECK(f.eval(vec2(1.0, 1.0), 0.0) == 0.0);
  const LevelSetField ball = make_normal_form(2, 0, -1);  // |x|^2 - t
  CHECK(ball.eval(vec2(0.5, 0.0), 0.25) == doctest::Approx(0.0));
}

TEST_CASE("normal form argument validation") {
  CHECK_THROWS_AS(make_normal_form(4, 0, 1), argument_error);
  CHECK_THROWS_AS(make_normal_form(2, 3, 1), argument_error);
  CHECK_THROWS_AS(make_normal_form(2, -1, 1), argument_error);
  CHECK_THROWS_AS(make_normal_form(2, 0, 0), argument_error);
}

TEST_CASE("scenario catalog covers all fourteen transitions") {
  CHECK(scenario_catalog().size() == 14);
  const ScenarioSpec& split = scenario_spec("split2d");
  CHECK(split.dim == 2);
  CHECK(split.q == 1);
  CHECK(split.sgn == 1);
  const ScenarioSpec& create = scenario_spec("island3d-create");
  CHECK(create.t_begin == 0.0);  // domain exists only after the critical time
  const ScenarioSpec& vanish = scenario_spec("island2d-vanish");
  CHECK(vanish.t_end == 0.0);
  CHECK_THROWS_AS(scenario_spec("no-such-scenario"), argument_error);
}

TEST_CASE("hessian symmetry at random query points") {
  const LevelSetField f = make_analytic_field_fd(
      3, -1.0, 1.0,
      [](const Vec& x, double t) {
        return std::sin(x[0] * x[1]) + x[2] * x[2] * x[0] + t * x[1];
      });
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x{uni(rng), uni(rng), uni(rng)};
    const Mat h = f.hess(x, uni(rng));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(h[i][j] == doctest::Approx(h[j][i]).epsilon(1e-6));
  }
}

TEST_CASE("derivative consistency: exact for polynomials") {
  const LevelSetField f = make_normal_form(3, 1, 1);
  std::vector<std::pair<Vec, double>> samples;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int i = 0; i < 20; ++i)
    samples.push_back({{uni(rng), uni(rng), uni(rng)}, uni(rng)});
  const DerivativeReport rep = check_derivative_consistency(f, samples);
  // Gradient and time-derivative differences are exact for polynomials; the
  // second difference carries ~eps/h^2 roundoff at step 1e-4.
  CHECK(rep.max_grad_err < 1e-10);
  CHECK(rep.max_dt_err < 1e-10);
  CHECK(rep.max_hess_err < 1e-7);
  CHECK_FALSE(rep.fd_derivatives);
}

TEST_CASE("derivative consistency: analytic field under 1e-6") {
  const LevelSetField f = make_analytic_field(
      2, -1.0, 1.0,
      [](const Vec& x, double t) { return std::sin(x[0]) + x[1] * x[1] + t; },
      [](const Vec& x, double) { return vec2(std::cos(x[0]), 2.0 * x[1]); },
      [](const Vec& x, double) {
        Mat h{};
        h[0][0] = -std::sin(x[0]);
        h[1][1] = 2.0;
        return h;
      },
      [](const Vec&, double) { return 1.0; });
  std::vector<std::pair<Vec, double>> samples;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) samples.push_back({{uni(rng), uni(rng), 0.0}, uni(rng)});
  CHECK(check_derivative_consistency(f, samples).max() < 1e-6);
}

TEST_CASE("derivative consistency: injected gradient fault is loud") {
  LevelSetField f = make_normal_form(2, 0, 1);
  f.grad = [](const Vec& x, double) { return vec2(2.0 * x[0] + 0.5, 2.0 * x[1]); };
  std::vector<std::pair<Vec, double>> samples = {{vec2(0.3, 0.2), 0.1}};
  CHECK(check_derivative_consistency(f, samples).max_grad_err > 1e-3);
}

TEST_CASE("windowed field takes the ball branch outside") {
  const LevelSetField w = windowed(make_scenario("split2d"), 0.8);
  // Inside the ball and above the window level: normal-form branch.
  CHECK(w.eval(vec2(0.1, 0.1), 0.0) == doctest::Approx(0.0));
  // Outside the ball the window dominates.
  CHECK(w.eval(vec2(0.9, 0.0), 0.0) == doctest::Approx(0.81 - 0.64));
  CHECK(w.grad(vec2(0.9, 0.0), 0.0)[0] == doctest::Approx(1.8));
  CHECK_THROWS_AS(windowed(make_scenario("split2d"), -1.0), argument_error);
}

TEST_CASE("containment: windowed catalog fields stay in the box") {
  const SpaceTimeBox box{1.0, -1.0, 1.0};
  CHECK(verify_containment(make_scenario_windowed("split2d", 1.0), box));
  CHECK(verify_containment(make_scenario_windowed("hole2d-create", 1.0), box));
  // The raw saddle escapes through the box faces.
  CHECK_FALSE(verify_containment(make_scenario("split2d"), box));
}

TEST_CASE("normal velocity: shrinking-disk boundary") {
  const LevelSetField f = make_normal_form(2, 0, -1);  // |x|^2 - t
  const Vec v = normal_velocity(f, vec2(1.0, 0.0), 1.0);
  CHECK(v[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(0.0));
}

TEST_CASE("normal velocity: saddle point example") {
  const LevelSetField f = make_normal_form(2, 1, 1);  // -x1^2 + x2^2 + t
  const Vec v = normal_velocity(f, vec2(1.0, 1.0), 0.0);
  CHECK(v[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("normal velocity blows up near the critical point") {
  const LevelSetField f = make_normal_form(2, 0, -1);
  const Vec v = normal_velocity(f, vec2(1e-4, 0.0), 1e-8);
  CHECK(norm(v, 2) == doctest::Approx(5e3).epsilon(1e-8));
}

TEST_CASE("normal velocity preconditions") {
  const LevelSetField f = make_normal_form(2, 0, -1);
  CHECK_THROWS_AS(normal_velocity(f, vec2(0.5, 0.0), 1.0), argument_error);
  CHECK_THROWS_AS(normal_velocity(f, vec2(0.0, 0.0), 0.0), degenerate_point_error);
}

TEST_CASE("normal velocity is parallel to the gradient") {
  const LevelSetField f = make_normal_form(2, 1, 1);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(0.2, 1.2);
  for (int trial = 0; trial < 50; ++trial) {
    // Point on Gamma(t) for t < 0: x2 = sqrt(x1^2 - t) makes phi vanish.
    const double x1 = uni(rng);
    const double t = -uni(rng);
    const double x2 = std::sqrt(x1 * x1 - t);
    const Vec x = vec2(x1, x2);
    const Vec v = normal_velocity(f, x, t);
    const Vec g = f.grad(x, t);
    const double cosang = dot(v, g, 2) / (norm(v, 2) * norm(g, 2));
    CHECK(std::abs(std::abs(cosang) - 1.0) < 1e-12);
  }
}

TEST_CASE("shrinking disk: |V| = 1/(2 sqrt(t)) on the boundary") {
  const LevelSetField f = make_normal_form(2, 0, -1);
  for (double t : {1.0, 0.5, 0.25, 0.04, 0.01}) {
    const double r = std::sqrt(t);
    const Vec x = vec2(r / std::sqrt(2.0), r / std::sqrt(2.0));
    CHECK(norm(normal_velocity(f, x, t), 2) ==
          doctest::Approx(1.0 / (2.0 * r)).epsilon(1e-10));
  }
}

}  // TEST_SUITE
