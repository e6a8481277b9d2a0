#include "mheat/inequalities.hpp"

#include <cmath>

#include "mheat/errors.hpp"

namespace mheat {

namespace {

constexpr double kEigTol = 1e-8;
constexpr int kEigMaxIter = 5000;

double dot_v(const std::vector<double>& a, const std::vector<double>& b, Exec exec) {
  return reduce_sum(exec, static_cast<i64>(a.size()),
                    [&](i64 i) { return a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)]; });
}

}  // namespace

ConstantEstimate poincare_constant(const LevelSetField& field,
                                   const BackgroundGrid& grid, double t,
                                   Exec exec) {
  const DomainSlice slice = build_slice(field, grid, t, exec);
  if (slice.empty()) throw empty_domain_error("poincare_constant: empty slice");
  const SliceOperators ops = assemble_operators(slice, /*dirichlet_cut=*/true);
  const int m = static_cast<int>(ops.nodes.size());
  const Csr& G = ops.stiffness;

  // Inverse iteration on G u = lambda M u with deterministic all-ones start.
  std::vector<double> x(static_cast<std::size_t>(m), 1.0), Mx(static_cast<std::size_t>(m)), Gx(static_cast<std::size_t>(m));
  double lambda = 0.0, lambda_prev = -1.0;
  int it = 0;
  for (; it < kEigMaxIter; ++it) {
    parallel_for(exec, m, [&](i64 i) { Mx[static_cast<std::size_t>(i)] = ops.mass[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)]; });
    std::vector<double> y = cg_solve(G, {}, Mx, 1e-12, 20000, exec);
    const double ynorm = std::sqrt(reduce_sum(exec, m, [&](i64 i) {
      return ops.mass[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    }));
    parallel_for(exec, m, [&](i64 i) { x[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] / ynorm; });
    spmv(G, x, Gx, exec);
    const double num = dot_v(x, Gx, exec);
    const double den = reduce_sum(exec, m, [&](i64 i) {
      return ops.mass[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    });
    lambda = num / den;
    if (it > 0 && std::abs(lambda - lambda_prev) <= kEigTol * std::abs(lambda)) break;
    lambda_prev = lambda;
  }
  if (it == kEigMaxIter)
    throw convergence_error("poincare_constant: inverse iteration stalled");

  ConstantEstimate est;
  est.quantity = "poincare";
  est.t = t;
  est.n = grid.n;
  est.value = 1.0 / std::sqrt(lambda);
  est.iterations = it + 1;
  est.extremizer_available = true;
  return est;
}

ConstantEstimate trace_constant(const LevelSetField& field,
                                const BackgroundGrid& grid, double t,
                                bool weighted, Exec exec) {
  const DomainSlice slice = build_slice(field, grid, t, exec);
  if (slice.empty()) throw empty_domain_error("trace_constant: empty slice");
  if (slice.facets.empty()) throw empty_domain_error("trace_constant: empty boundary");
  const SliceOperators ops = assemble_operators(slice, /*dirichlet_cut=*/false);
  const int m = static_cast<int>(ops.nodes.size());

  double wm = 1.0, wg = 1.0;  // weights on the mass and gradient parts
  if (weighted) {
    const double at = std::abs(t);
    if (!(at > 0.0)) throw argument_error("trace_constant: weighted form needs t != 0");
    wm = 1.0 / std::sqrt(at);
    wg = std::sqrt(at);
  }

  // Facet interpolation: convex weights over the active corners of the cell
  // containing the facet centroid (nearest active node as a fallback), so
  // u == 1 interpolates to exactly 1.
  const auto& grid_ref = slice.grid;
  const int n = grid_ref.n;
  const double h = grid_ref.h();
  const int d = grid_ref.dim;
  struct Entry { int node; double w; };
  std::vector<std::vector<Entry>> interp(slice.facets.size());
  for (std::size_t f = 0; f < slice.facets.size(); ++f) {
    const Vec c = slice.facets[f].centroid;
    int base[3] = {0, 0, 0};
    double frac[3] = {0.0, 0.0, 0.0};
    for (int ax = 0; ax < d; ++ax) {
      double u = (c[ax] + grid_ref.a) / h;
      int i = static_cast<int>(std::floor(u));
      i = std::clamp(i, 0, n - 2);
      base[ax] = i;
      frac[ax] = std::clamp(u - i, 0.0, 1.0);
    }
    auto& list = interp[f];
    const int corners = d == 2 ? 4 : 8;
    double total = 0.0;
    for (int cbits = 0; cbits < corners; ++cbits) {
      const int di = cbits & 1, dj = (cbits >> 1) & 1, dk = (cbits >> 2) & 1;
      const i64 gidx = grid_ref.index(base[0] + di, base[1] + dj,
                                      d == 3 ? base[2] + dk : 0);
      const int loc = ops.local[static_cast<std::size_t>(gidx)];
      if (loc < 0) continue;
      double w = (di ? frac[0] : 1.0 - frac[0]) * (dj ? frac[1] : 1.0 - frac[1]);
      if (d == 3) w *= dk ? frac[2] : 1.0 - frac[2];
      if (w <= 0.0) continue;
      list.push_back({loc, w});
      total += w;
    }
    if (list.empty()) {
      // No active corner in this cell: fall back to the nearest active node.
      double best = std::numeric_limits<double>::infinity();
      int best_loc = 0;
      for (int r = 0; r < m; ++r) {
        const Vec x = grid_ref.node(ops.nodes[static_cast<std::size_t>(r)]);
        const double dd = dist(x, c, d);
        if (dd < best) { best = dd; best_loc = r; }
      }
      list.push_back({best_loc, 1.0});
      total = 1.0;
    }
    for (auto& e : list) e.w /= total;
  }

  auto apply_B = [&](const std::vector<double>& u, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t f = 0; f < slice.facets.size(); ++f) {
      double uf = 0.0;
      for (const Entry& e : interp[f]) uf += e.w * u[static_cast<std::size_t>(e.node)];
      const double s = slice.facets[f].measure * uf;
      for (const Entry& e : interp[f]) out[static_cast<std::size_t>(e.node)] += s * e.w;
    }
  };
  auto quad_B = [&](const std::vector<double>& u) {
    double s = 0.0;
    for (std::size_t f = 0; f < slice.facets.size(); ++f) {
      double uf = 0.0;
      for (const Entry& e : interp[f]) uf += e.w * u[static_cast<std::size_t>(e.node)];
      s += slice.facets[f].measure * uf * uf;
    }
    return s;
  };

  // A = wm*M + wg*G_free; power iteration on A^{-1} B.
  std::vector<double> shift(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) shift[static_cast<std::size_t>(r)] = wm * ops.mass[static_cast<std::size_t>(r)];
  Csr Gs = ops.stiffness;
  for (double& v : Gs.val) v *= wg;

  auto quad_A = [&](const std::vector<double>& u) {
    std::vector<double> Gu(static_cast<std::size_t>(m));
    spmv(Gs, u, Gu, exec);
    return dot_v(u, Gu, exec) + reduce_sum(exec, m, [&](i64 i) {
             return shift[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
           });
  };

  std::vector<double> x(static_cast<std::size_t>(m), 1.0), Bx(static_cast<std::size_t>(m));
  double mu = 0.0, mu_prev = -1.0;
  int it = 0;
  for (; it < kEigMaxIter; ++it) {
    apply_B(x, Bx);
    std::vector<double> y = cg_solve(Gs, shift, Bx, 1e-12, 20000, exec);
    const double ynorm = std::sqrt(quad_A(y));
    if (ynorm == 0.0) break;
    parallel_for(exec, m, [&](i64 i) { x[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] / ynorm; });
    mu = quad_B(x) / quad_A(x);
    if (it > 0 && std::abs(mu - mu_prev) <= kEigTol * std::abs(mu)) break;
    mu_prev = mu;
  }
  if (it == kEigMaxIter)
    throw convergence_error("trace_constant: power iteration stalled");

  ConstantEstimate est;
  est.quantity = weighted ? "trace_weighted" : "trace_plain";
  est.t = t;
  est.n = grid.n;
  est.value = mu;
  est.iterations = it + 1;
  est.extremizer_available = true;
  return est;
}

HardyMatrices hardy_matrices(double a, double b, double p, int n) {
  if (!(a >= 0.0) || !(b > a)) throw argument_error("hardy: need 0 <= a < b");
  if (!(p >= 0.0)) throw argument_error("hardy: need p >= 0");
  if (n < 64) throw argument_error("hardy: need n >= 64 cells");

  HardyMatrices hm;
  hm.m = n;  // nodes 0..n-1 free; node n at x=b eliminated by u(b)=0
  hm.k_diag.assign(static_cast<std::size_t>(n), 0.0);
  hm.k_off.assign(static_cast<std::size_t>(n), 0.0);  // k_off[i]: coupling (i, i+1)
  hm.b_diag.assign(static_cast<std::size_t>(n), 0.0);
  hm.b_off.assign(static_cast<std::size_t>(n), 0.0);

  const double hc = (b - a) / n;
  auto node_x = [&](int i) { return a + hc * i; };
  for (int cell = 0; cell < n; ++cell) {
    const double x0 = node_x(cell);
    const double x1 = node_x(cell + 1);
    const double xm = 0.5 * (x0 + x1);
    const double wp = std::pow(xm, p);

    // Stiffness: (u')^2 is constant on the cell, x^p integrated exactly.
    double ixp;  // integral of x^p over the cell
    if (p == 0.0) {
      ixp = hc;
    } else {
      ixp = (std::pow(x1, p + 1.0) - std::pow(x0, p + 1.0)) / (p + 1.0);
    }
    const double ks = ixp / (hc * hc);
    hm.k_diag[static_cast<std::size_t>(cell)] += ks;
    if (cell + 1 < n) {
      hm.k_diag[static_cast<std::size_t>(cell) + 1] += ks;
      hm.k_off[static_cast<std::size_t>(cell)] -= ks;
    }

    // Singular mass: s = b - x runs over [s_hi, s_lo]; the linear basis gives
    // u = alpha + beta*s with
    //   alpha = (-s_hi*u_i + s_lo*u_{i+1})/hc,  beta = (u_i - u_{i+1})/hc,
    // and int u^2/s^2 ds = alpha^2*(1/s_hi - 1/s_lo) + 2*alpha*beta*ln(s_lo/s_hi)
    //                      + beta^2*hc.
    // On the last cell s_hi = 0 and u(b) = 0 force alpha = 0, so only the
    // beta^2 term survives (finite by construction).
    const double s_lo = hc * (n - cell);
    const double s_hi = hc * (n - cell - 1);
    const double pi_ = -s_hi / hc, pj = s_lo / hc;  // alpha coefficients
    const double qi = 1.0 / hc, qj = -1.0 / hc;     // beta coefficients
    double I1, I2;
    if (cell + 1 == n) {
      I1 = 0.0;  // multiplied only by alpha-terms, which vanish
      I2 = 0.0;
      const double I3 = hc;
      hm.b_diag[static_cast<std::size_t>(cell)] += wp * qi * qi * I3;
      continue;
    }
    I1 = 1.0 / s_hi - 1.0 / s_lo;
    I2 = std::log(s_lo / s_hi);
    const double I3 = hc;
    const double mii = wp * (pi_ * pi_ * I1 + 2.0 * pi_ * qi * I2 + qi * qi * I3);
    const double mjj = wp * (pj * pj * I1 + 2.0 * pj * qj * I2 + qj * qj * I3);
    const double mij = wp * (pi_ * pj * I1 + (pi_ * qj + pj * qi) * I2 + qi * qj * I3);
    hm.b_diag[static_cast<std::size_t>(cell)] += mii;
    hm.b_diag[static_cast<std::size_t>(cell) + 1] += mjj;
    hm.b_off[static_cast<std::size_t>(cell)] += mij;
  }
  return hm;
}

namespace {

// Thomas solve for the symmetric tridiagonal (diag, off) system.
std::vector<double> tridiag_solve(const std::vector<double>& diag,
                                  const std::vector<double>& off,
                                  std::vector<double> rhs) {
  const int m = static_cast<int>(diag.size());
  std::vector<double> c(static_cast<std::size_t>(m), 0.0);
  std::vector<double> dd = diag;
  for (int i = 1; i < m; ++i) {
    const double w = off[static_cast<std::size_t>(i) - 1] / dd[static_cast<std::size_t>(i) - 1];
    dd[static_cast<std::size_t>(i)] -= w * off[static_cast<std::size_t>(i) - 1];
    rhs[static_cast<std::size_t>(i)] -= w * rhs[static_cast<std::size_t>(i) - 1];
    c[static_cast<std::size_t>(i)] = w;
  }
  rhs[static_cast<std::size_t>(m) - 1] /= dd[static_cast<std::size_t>(m) - 1];
  for (int i = m - 2; i >= 0; --i)
    rhs[static_cast<std::size_t>(i)] = (rhs[static_cast<std::size_t>(i)] - off[static_cast<std::size_t>(i)] * rhs[static_cast<std::size_t>(i) + 1]) / dd[static_cast<std::size_t>(i)];
  return rhs;
}

}  // namespace

ConstantEstimate hardy_constant(double a, double b, double p, int n) {
  const HardyMatrices hm = hardy_matrices(a, b, p, n);
  const int m = hm.m;
  auto mul = [&](const std::vector<double>& diag, const std::vector<double>& off,
                 const std::vector<double>& x) {
    std::vector<double> y(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      double s = diag[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
      if (i > 0) s += off[static_cast<std::size_t>(i) - 1] * x[static_cast<std::size_t>(i) - 1];
      if (i + 1 < m) s += off[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i) + 1];
      y[static_cast<std::size_t>(i)] = s;
    }
    return y;
  };

  std::vector<double> x(static_cast<std::size_t>(m), 1.0);
  double mu = 0.0, mu_prev = -1.0;
  int it = 0;
  for (; it < 20000; ++it) {
    std::vector<double> Bx = mul(hm.b_diag, hm.b_off, x);
    std::vector<double> y = tridiag_solve(hm.k_diag, hm.k_off, Bx);
    double nrm = 0.0;
    for (double v : y) nrm = std::max(nrm, std::abs(v));
    for (double& v : y) v /= nrm;
    std::vector<double> By = mul(hm.b_diag, hm.b_off, y);
    std::vector<double> Ky = mul(hm.k_diag, hm.k_off, y);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < m; ++i) {
      num += y[static_cast<std::size_t>(i)] * By[static_cast<std::size_t>(i)];
      den += y[static_cast<std::size_t>(i)] * Ky[static_cast<std::size_t>(i)];
    }
    mu = num / den;
    x = y;
    if (it > 0 && std::abs(mu - mu_prev) <= 1e-10 * std::abs(mu)) break;
    mu_prev = mu;
  }

  ConstantEstimate est;
  est.quantity = "hardy";
  est.a = a;
  est.b = b;
  est.p = p;
  est.n = n;
  est.value = mu;
  est.iterations = it + 1;
  est.extremizer_available = true;
  return est;
}

}  // namespace mheat
