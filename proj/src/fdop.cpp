#include "mheat/fdop.hpp"

#include <cmath>

#include "mheat/errors.hpp"

namespace mheat {

void spmv(const Csr& A, const std::vector<double>& x, std::vector<double>& y,
          Exec exec) {
  y.resize(static_cast<std::size_t>(A.nrows));
  parallel_for(exec, A.nrows, [&](i64 r) {
    double s = 0.0;
    for (int p = A.rowptr[static_cast<std::size_t>(r)]; p < A.rowptr[static_cast<std::size_t>(r) + 1]; ++p)
      s += A.val[static_cast<std::size_t>(p)] * x[static_cast<std::size_t>(A.col[static_cast<std::size_t>(p)])];
    y[static_cast<std::size_t>(r)] = s;
  });
}

SliceOperators assemble_operators(const DomainSlice& slice, bool dirichlet_cut) {
  const auto& grid = slice.grid;
  const int d = grid.dim;
  const int n = grid.n;
  const double h = grid.h();
  const i64 nn = grid.num_nodes();

  SliceOperators ops;
  ops.h = h;
  ops.dim = d;
  ops.local.assign(static_cast<std::size_t>(nn), -1);
  ops.nodes.reserve(static_cast<std::size_t>(slice.num_active));
  for (i64 idx = 0; idx < nn; ++idx) {
    if (slice.active[static_cast<std::size_t>(idx)]) {
      ops.local[static_cast<std::size_t>(idx)] = static_cast<int>(ops.nodes.size());
      ops.nodes.push_back(idx);
    }
  }
  const int m = static_cast<int>(ops.nodes.size());
  ops.mass.resize(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r)
    ops.mass[static_cast<std::size_t>(r)] = slice.weight[static_cast<std::size_t>(ops.nodes[static_cast<std::size_t>(r)])];

  // h^{d-2} edge factor.
  const double ef = d == 2 ? 1.0 : h;

  Csr& G = ops.stiffness;
  G.nrows = m;
  G.rowptr.assign(static_cast<std::size_t>(m) + 1, 0);
  std::vector<int> count(static_cast<std::size_t>(m), 1);  // diagonal always present
  for (int r = 0; r < m; ++r) {
    int i, j, k;
    grid.unpack(ops.nodes[static_cast<std::size_t>(r)], i, j, k);
    const int pos[3] = {i, j, k};
    for (int ax = 0; ax < d; ++ax) {
      const i64 step = ax == 0 ? 1 : (ax == 1 ? n : i64(n) * n);
      for (int side = -1; side <= 1; side += 2) {
        const int p = pos[ax] + side;
        if (p < 0 || p >= n) continue;
        if (ops.local[static_cast<std::size_t>(ops.nodes[static_cast<std::size_t>(r)] + side * step)] >= 0)
          ++count[static_cast<std::size_t>(r)];
      }
    }
  }
  for (int r = 0; r < m; ++r) G.rowptr[static_cast<std::size_t>(r) + 1] = G.rowptr[static_cast<std::size_t>(r)] + count[static_cast<std::size_t>(r)];
  G.col.assign(static_cast<std::size_t>(G.rowptr[static_cast<std::size_t>(m)]), 0);
  G.val.assign(static_cast<std::size_t>(G.rowptr[static_cast<std::size_t>(m)]), 0.0);

  parallel_for(Exec::par, m, [&](i64 rr) {
    const int r = static_cast<int>(rr);
    const i64 gidx = ops.nodes[static_cast<std::size_t>(r)];
    int i, j, k;
    grid.unpack(gidx, i, j, k);
    const int pos[3] = {i, j, k};
    const auto& cuts = slice.cut[static_cast<std::size_t>(gidx)];
    int p = G.rowptr[static_cast<std::size_t>(r)];
    double diag = 0.0;
    const int diag_slot = p++;
    for (int ax = 0; ax < d; ++ax) {
      const i64 step = ax == 0 ? 1 : (ax == 1 ? n : i64(n) * n);
      for (int side = 0; side < 2; ++side) {  // 0: +, 1: -
        const int q = pos[ax] + (side == 0 ? 1 : -1);
        if (q < 0 || q >= n) continue;
        const int nb = ops.local[static_cast<std::size_t>(gidx + (side == 0 ? step : -step))];
        if (nb >= 0) {
          G.col[static_cast<std::size_t>(p)] = nb;
          G.val[static_cast<std::size_t>(p)] = -ef;
          ++p;
          diag += ef;
        } else if (dirichlet_cut) {
          diag += ef / cuts[static_cast<std::size_t>(2 * ax + side)];
        }
      }
    }
    G.col[static_cast<std::size_t>(diag_slot)] = r;
    G.val[static_cast<std::size_t>(diag_slot)] = diag;
  });
  return ops;
}

Csr assemble_upwind_advection(const DomainSlice& slice, const SliceOperators& ops,
                              const std::function<Vec(const Vec&, double)>& w) {
  const auto& grid = slice.grid;
  const int d = grid.dim;
  const int n = grid.n;
  const double h = grid.h();
  const double face = d == 2 ? h : h * h;
  const int m = static_cast<int>(ops.nodes.size());

  // Dense-ish triplet assembly per row: diagonal + up to 2d neighbors.
  Csr A;
  A.nrows = m;
  A.rowptr.assign(static_cast<std::size_t>(m) + 1, 0);
  std::vector<std::vector<std::pair<int, double>>> rows(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    const i64 gidx = ops.nodes[static_cast<std::size_t>(r)];
    int i, j, k;
    grid.unpack(gidx, i, j, k);
    const int pos[3] = {i, j, k};
    const Vec x = grid.node(gidx);
    auto& row = rows[static_cast<std::size_t>(r)];
    row.push_back({r, 0.0});
    for (int ax = 0; ax < d; ++ax) {
      const i64 step = ax == 0 ? 1 : (ax == 1 ? n : i64(n) * n);
      for (int side = 0; side < 2; ++side) {
        const double sgn = side == 0 ? 1.0 : -1.0;  // outward direction on this face
        const int q = pos[ax] + (side == 0 ? 1 : -1);
        if (q < 0 || q >= n) continue;
        Vec xf = x;
        xf[ax] += sgn * 0.5 * h;
        const double wf = sgn * w(xf, slice.time)[ax];  // outward normal velocity
        const int nb = ops.local[static_cast<std::size_t>(gidx + (side == 0 ? step : -step))];
        // Outflow takes the interior value, inflow the neighbor value
        // (zero when the neighbor is outside the domain).
        if (wf >= 0.0) {
          row[0].second += wf * face;
        } else if (nb >= 0) {
          row.push_back({nb, wf * face});
        }
      }
    }
  }
  for (int r = 0; r < m; ++r) A.rowptr[static_cast<std::size_t>(r) + 1] = A.rowptr[static_cast<std::size_t>(r)] + static_cast<int>(rows[static_cast<std::size_t>(r)].size());
  A.col.resize(static_cast<std::size_t>(A.rowptr[static_cast<std::size_t>(m)]));
  A.val.resize(static_cast<std::size_t>(A.rowptr[static_cast<std::size_t>(m)]));
  for (int r = 0; r < m; ++r) {
    int p = A.rowptr[static_cast<std::size_t>(r)];
    for (const auto& [c, v] : rows[static_cast<std::size_t>(r)]) {
      A.col[static_cast<std::size_t>(p)] = c;
      A.val[static_cast<std::size_t>(p)] = v;
      ++p;
    }
  }
  return A;
}

namespace {
double dot_v(const std::vector<double>& a, const std::vector<double>& b, Exec exec) {
  return reduce_sum(exec, static_cast<i64>(a.size()),
                    [&](i64 i) { return a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)]; });
}

// Krylov iterations issue many short vector kernels per step; the fork/join
// cost swamps the work until the systems are large. Below this row count the
// solvers run their internals serially regardless of the caller's policy
// (parallelism then comes from the slab/sweep level).
constexpr int kKrylovParallelRows = 200000;

Exec krylov_exec(Exec exec, int rows) {
  return rows >= kKrylovParallelRows ? exec : Exec::seq;
}
}  // namespace

std::vector<double> cg_solve(const Csr& A, const std::vector<double>& diag_shift,
                             const std::vector<double>& b, double rel_tol,
                             int max_iter, Exec exec) {
  const int m = A.nrows;
  exec = krylov_exec(exec, m);
  std::vector<double> x(static_cast<std::size_t>(m), 0.0);
  const double bnorm = std::sqrt(dot_v(b, b, exec));
  if (bnorm == 0.0) return x;

  std::vector<double> prec(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    double dg = diag_shift.empty() ? 0.0 : diag_shift[static_cast<std::size_t>(r)];
    for (int p = A.rowptr[static_cast<std::size_t>(r)]; p < A.rowptr[static_cast<std::size_t>(r) + 1]; ++p)
      if (A.col[static_cast<std::size_t>(p)] == r) dg += A.val[static_cast<std::size_t>(p)];
    prec[static_cast<std::size_t>(r)] = dg > 0.0 ? 1.0 / dg : 1.0;
  }

  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    spmv(A, v, out, exec);
    if (!diag_shift.empty())
      parallel_for(exec, m, [&](i64 i) { out[static_cast<std::size_t>(i)] += diag_shift[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)]; });
  };

  std::vector<double> r = b, z(static_cast<std::size_t>(m)), p(static_cast<std::size_t>(m)), Ap(static_cast<std::size_t>(m));
  parallel_for(exec, m, [&](i64 i) { z[static_cast<std::size_t>(i)] = prec[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)]; });
  p = z;
  double rz = dot_v(r, z, exec);
  for (int it = 0; it < max_iter; ++it) {
    apply(p, Ap);
    const double pAp = dot_v(p, Ap, exec);
    if (pAp <= 0.0) break;  // semidefinite stall; residual check below decides
    const double alpha = rz / pAp;
    parallel_for(exec, m, [&](i64 i) {
      x[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)];
      r[static_cast<std::size_t>(i)] -= alpha * Ap[static_cast<std::size_t>(i)];
    });
    const double rnorm = std::sqrt(dot_v(r, r, exec));
    if (rnorm <= rel_tol * bnorm) return x;
    parallel_for(exec, m, [&](i64 i) { z[static_cast<std::size_t>(i)] = prec[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)]; });
    const double rz_new = dot_v(r, z, exec);
    const double beta = rz_new / rz;
    rz = rz_new;
    parallel_for(exec, m, [&](i64 i) { p[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] + beta * p[static_cast<std::size_t>(i)]; });
  }
  const double rnorm = std::sqrt(dot_v(r, r, exec));
  if (rnorm <= rel_tol * bnorm) return x;
  throw convergence_error("cg_solve: no convergence in " + std::to_string(max_iter) +
                          " iterations (residual " + std::to_string(rnorm / bnorm) + ")");
}

std::vector<double> bicgstab_solve(const Csr& A, const std::vector<double>& diag_shift,
                                   const std::vector<double>& b, double rel_tol,
                                   int max_iter, Exec exec) {
  const int m = A.nrows;
  exec = krylov_exec(exec, m);
  std::vector<double> x(static_cast<std::size_t>(m), 0.0);
  const double bnorm = std::sqrt(dot_v(b, b, exec));
  if (bnorm == 0.0) return x;

  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    spmv(A, v, out, exec);
    if (!diag_shift.empty())
      parallel_for(exec, m, [&](i64 i) { out[static_cast<std::size_t>(i)] += diag_shift[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)]; });
  };

  std::vector<double> r = b, r0 = b, p(static_cast<std::size_t>(m), 0.0), v(static_cast<std::size_t>(m), 0.0),
      s(static_cast<std::size_t>(m)), t(static_cast<std::size_t>(m));
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    const double rho_new = dot_v(r0, r, exec);
    if (rho_new == 0.0) break;
    if (it == 0) {
      p = r;
    } else {
      const double beta = (rho_new / rho) * (alpha / omega);
      parallel_for(exec, m, [&](i64 i) {
        p[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)] + beta * (p[static_cast<std::size_t>(i)] - omega * v[static_cast<std::size_t>(i)]);
      });
    }
    rho = rho_new;
    apply(p, v);
    alpha = rho / dot_v(r0, v, exec);
    parallel_for(exec, m, [&](i64 i) { s[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)] - alpha * v[static_cast<std::size_t>(i)]; });
    if (std::sqrt(dot_v(s, s, exec)) <= rel_tol * bnorm) {
      parallel_for(exec, m, [&](i64 i) { x[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)]; });
      return x;
    }
    apply(s, t);
    omega = dot_v(t, s, exec) / dot_v(t, t, exec);
    parallel_for(exec, m, [&](i64 i) {
      x[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)] + omega * s[static_cast<std::size_t>(i)];
      r[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)] - omega * t[static_cast<std::size_t>(i)];
    });
    if (std::sqrt(dot_v(r, r, exec)) <= rel_tol * bnorm) return x;
    if (omega == 0.0) break;
  }
  throw convergence_error("bicgstab_solve: no convergence in " +
                          std::to_string(max_iter) + " iterations");
}

}  // namespace mheat
