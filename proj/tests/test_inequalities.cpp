#include <doctest.h>

#include <cmath>
#include <vector>

#include "mheat/inequalities.hpp"

using namespace mheat;

namespace {

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

LevelSetField square_field() {
  return make_analytic_field(
      2, 0.0, 1.0,
      [](const Vec& x, double) { return std::max(std::abs(x[0]), std::abs(x[1])) - 1.0; },
      [](const Vec& x, double) {
        Vec g{0.0, 0.0, 0.0};
        if (std::abs(x[0]) >= std::abs(x[1]))
          g[0] = x[0] >= 0.0 ? 1.0 : -1.0;
        else
          g[1] = x[1] >= 0.0 ? 1.0 : -1.0;
        return g;
      },
      [](const Vec&, double) { return Mat{}; }, [](const Vec&, double) { return 0.0; });
}

// Dense generalized symmetric eigensolve oracle: reduce B u = mu K u with the
// Cholesky factor of K, then cyclic Jacobi on the full dense matrix. Only
// viable for small n; used to validate the production power iteration.
double dense_hardy_oracle(double a, double b, double p, int n) {
  const HardyMatrices hm = hardy_matrices(a, b, p, n);
  const int m = hm.m;
  auto kfull = std::vector<std::vector<double>>(m, std::vector<double>(m, 0.0));
  auto bfull = kfull;
  for (int i = 0; i < m; ++i) {
    kfull[i][i] = hm.k_diag[i];
    bfull[i][i] = hm.b_diag[i];
    if (i + 1 < m) {
      kfull[i][i + 1] = kfull[i + 1][i] = hm.k_off[i];
      bfull[i][i + 1] = bfull[i + 1][i] = hm.b_off[i];
    }
  }
  // Cholesky K = L L^T.
  auto L = std::vector<std::vector<double>>(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = kfull[i][j];
      for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
      if (i == j)
        L[i][i] = std::sqrt(s);
      else
        L[i][j] = s / L[j][j];
    }
  }
  // C = L^{-1} B L^{-T}.
  auto C = bfull;
  for (int c = 0; c < m; ++c) {  // forward solve columns
    for (int i = 0; i < m; ++i) {
      double s = C[i][c];
      for (int k = 0; k < i; ++k) s -= L[i][k] * C[k][c];
      C[i][c] = s / L[i][i];
    }
  }
  for (int r = 0; r < m; ++r) {  // forward solve rows
    for (int i = 0; i < m; ++i) {
      double s = C[r][i];
      for (int k = 0; k < i; ++k) s -= L[i][k] * C[r][k];
      C[r][i] = s / L[i][i];
    }
  }
  // Jacobi sweeps for the largest eigenvalue.
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) off += C[i][j] * C[i][j];
    if (off < 1e-24) break;
    for (int pq = 0; pq < m; ++pq) {
      for (int q = pq + 1; q < m; ++q) {
        if (C[pq][q] == 0.0) continue;
        const double theta = (C[q][q] - C[pq][pq]) / (2.0 * C[pq][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < m; ++k) {
          const double a1 = C[k][pq], a2 = C[k][q];
          C[k][pq] = c * a1 - s * a2;
          C[k][q] = s * a1 + c * a2;
        }
        for (int k = 0; k < m; ++k) {
          const double a1 = C[pq][k], a2 = C[q][k];
          C[pq][k] = c * a1 - s * a2;
          C[q][k] = s * a1 + c * a2;
        }
      }
    }
  }
  double mu = C[0][0];
  for (int i = 1; i < m; ++i) mu = std::max(mu, C[i][i]);
  return mu;
}

}  // namespace

TEST_SUITE("inequalities") {

TEST_CASE("square side 2: separable eigenfunction value") {
  const ConstantEstimate est =
      poincare_constant(square_field(), BackgroundGrid(2, 1.0, 129), 0.5);
  const double ref = std::sqrt(2.0) / std::acos(-1.0);
  CHECK(std::abs(est.value - ref) / ref < 0.01);
}

TEST_CASE("unit disk against the Bessel-zero oracle") {
  const ConstantEstimate est =
      poincare_constant(circle_field(1.0), BackgroundGrid(2, 1.2, 129), 0.0);
  const double ref = 1.0 / 2.404825557695773;
  CHECK(std::abs(est.value - ref) / ref < 0.01);
}

TEST_CASE("poincare constant shrinks with the domain") {
  const BackgroundGrid grid(2, 1.2, 129);
  const double big = poincare_constant(circle_field(1.0), grid, 0.0).value;
  const double small = poincare_constant(circle_field(0.25), grid, 0.0).value;
  CHECK(small < big);
  CHECK(small == doctest::Approx(0.5 * big).epsilon(0.02));  // scaling by radius
}

TEST_CASE("empty slice raises empty_domain_error") {
  const LevelSetField shrink = make_normal_form(2, 0, -1);  // |x|^2 - t, empty for t<0
  CHECK_THROWS_AS(poincare_constant(shrink, BackgroundGrid(2, 1.0, 33), -0.5),
                  empty_domain_error);
  CHECK_THROWS_AS(trace_constant(shrink, BackgroundGrid(2, 1.0, 33), -0.5, false),
                  empty_domain_error);
}

TEST_CASE("trace constant dominates the constant-function ratio") {
  // u == 1 gives ||u||^2_boundary / ||u||^2_H1 = 2 pi / pi = 2 on the unit disk.
  const ConstantEstimate est =
      trace_constant(circle_field(1.0), BackgroundGrid(2, 1.2, 129), 0.0, false);
  CHECK(est.value >= 1.98);
  CHECK(est.value < 4.0);
}

TEST_CASE("weighted trace is t-uniform, unweighted grows") {
  const LevelSetField shrink = make_normal_form(2, 0, -1);
  const BackgroundGrid grid(2, 1.0, 129);
  const double w1 = trace_constant(shrink, grid, 0.25, true).value;
  const double w2 = trace_constant(shrink, grid, 0.04, true).value;
  CHECK(std::max(w1, w2) / std::min(w1, w2) < 1.5);
  const double p1 = trace_constant(shrink, grid, 0.25, false).value;
  const double p2 = trace_constant(shrink, grid, 0.04, false).value;
  CHECK(p2 > p1);
  CHECK(p2 / p1 > 2.0);  // constant-mode ratio alone is 2/r = 2.5x
}

TEST_CASE("hardy power iteration matches the dense Jacobi oracle") {
  for (const auto& [a, b, p] : {std::tuple{0.0, 1.0, 0.0}, std::tuple{0.0, 1.0, 2.0},
                                std::tuple{0.3, 0.9, 1.0}}) {
    const double mine = hardy_constant(a, b, p, 128).value;
    const double oracle = dense_hardy_oracle(a, b, p, 128);
    CHECK(mine == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("classical hardy constant approaches 4 from below") {
  const double v = hardy_constant(0.0, 1.0, 0.0, 1024).value;
  CHECK(v > 3.0);
  CHECK(v < 4.0);
  CHECK(hardy_constant(0.0, 1.0, 0.0, 256).value < v);
}

TEST_CASE("restricting the interval cannot raise the constant (nested grids)") {
  const double whole = hardy_constant(0.0, 1.0, 2.0, 1024).value;
  const double part = hardy_constant(0.5, 1.0, 2.0, 512).value;  // same h, nested
  CHECK(part <= whole + 1e-8);
}

TEST_CASE("hardy rescaling invariance") {
  const double va = hardy_constant(0.25, 0.8, 1.5, 256).value;
  const double vb = hardy_constant(0.25 / 0.8, 1.0, 1.5, 256).value;
  CHECK(std::abs(va - vb) <= 1e-10 * std::abs(va));
}

TEST_CASE("hardy argument validation") {
  CHECK_THROWS_AS(hardy_constant(-0.1, 1.0, 0.0, 128), argument_error);
  CHECK_THROWS_AS(hardy_constant(0.5, 0.5, 0.0, 128), argument_error);
  CHECK_THROWS_AS(hardy_constant(0.0, 1.0, -1.0, 128), argument_error);
  CHECK_THROWS_AS(hardy_constant(0.0, 1.0, 0.0, 32), argument_error);
}

}  // TEST_SUITE
