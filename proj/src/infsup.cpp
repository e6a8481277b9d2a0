#include "mheat/infsup.hpp"

#include <cmath>
#include <random>

#include <lapacke.h>

#include "mheat/errors.hpp"
#include "mheat/fdop.hpp"

namespace mheat {

namespace {

// Column-major dense helpers around LAPACKE.
struct Dense {
  int n = 0;
  std::vector<double> a;  // n x n column major
  double& at(int r, int c) { return a[static_cast<std::size_t>(c) * n + r]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(c) * n + r]; }
};

void cholesky(Dense& A) {
  const int info = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', A.n, A.a.data(), A.n);
  if (info != 0) throw convergence_error("infsup: Cholesky failed, info=" + std::to_string(info));
}

// X := L^{-1} X for the lower factor stored in L.
void forward_solve(const Dense& L, Dense& X) {
  const int info = LAPACKE_dtrtrs(LAPACK_COL_MAJOR, 'L', 'N', 'N', L.n, X.n,
                                  L.a.data(), L.n, X.a.data(), X.n);
  if (info != 0) throw convergence_error("infsup: triangular solve failed");
}

std::vector<double> singular_values(Dense M) {
  std::vector<double> s(static_cast<std::size_t>(M.n));
  std::vector<double> superb(static_cast<std::size_t>(M.n));
  const int info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'N', 'N', M.n, M.n, M.a.data(),
                                  M.n, s.data(), nullptr, 1, nullptr, 1, superb.data());
  if (info != 0) throw convergence_error("infsup: SVD failed, info=" + std::to_string(info));
  return s;
}

// One slab of the space-time system.
struct Slab {
  int m = 0;
  std::vector<double> mass;          // diagonal
  std::vector<std::vector<double>> G;  // dense stiffness m x m (row major)
  std::vector<int> prev;             // local index in previous slab, -1 if newly active
};

InfSupResult assemble_and_analyze(const std::vector<Slab>& slabs, double tau) {
  int total = 0;
  for (const auto& s : slabs) total += s.m;
  const int N = static_cast<int>(slabs.size());

  std::vector<int> offset(static_cast<std::size_t>(N), 0);
  for (int k = 1; k < N; ++k) offset[static_cast<std::size_t>(k)] = offset[static_cast<std::size_t>(k) - 1] + slabs[static_cast<std::size_t>(k) - 1].m;

  // A_H = blockdiag tau (M + G); T couples consecutive slabs; A_a = tau G.
  Dense AH{total, std::vector<double>(static_cast<std::size_t>(total) * total, 0.0)};
  Dense T{total, std::vector<double>(static_cast<std::size_t>(total) * total, 0.0)};
  Dense Aa{total, std::vector<double>(static_cast<std::size_t>(total) * total, 0.0)};
  for (int k = 0; k < N; ++k) {
    const Slab& s = slabs[static_cast<std::size_t>(k)];
    const int off = offset[static_cast<std::size_t>(k)];
    for (int i = 0; i < s.m; ++i) {
      AH.at(off + i, off + i) += tau * s.mass[static_cast<std::size_t>(i)];
      T.at(off + i, off + i) += s.mass[static_cast<std::size_t>(i)];
      for (int j = 0; j < s.m; ++j) {
        AH.at(off + i, off + j) += tau * s.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        Aa.at(off + i, off + j) += tau * s.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
      if (k > 0 && s.prev[static_cast<std::size_t>(i)] >= 0) {
        const int jp = offset[static_cast<std::size_t>(k) - 1] + s.prev[static_cast<std::size_t>(i)];
        T.at(off + i, jp) -= s.mass[static_cast<std::size_t>(i)];
      }
    }
  }

  // A_W = A_H + T^T A_H^{-1} T, computed via X = L_H^{-1} T.
  Dense LH = AH;
  cholesky(LH);
  Dense X = T;
  forward_solve(LH, X);
  Dense AW = AH;
  for (int c = 0; c < total; ++c)
    for (int r = 0; r < total; ++r) {
      double s = 0.0;
      for (int k = 0; k < total; ++k) s += X.at(k, r) * X.at(k, c);
      AW.at(r, c) += s;
    }

  Dense LW = AW;
  cholesky(LW);

  // Normalized operator L_H^{-1} (T + A_a) L_W^{-T}: rows of B pair with test
  // functions (H norm), columns with trial functions (W norm).
  Dense B{total, std::vector<double>(static_cast<std::size_t>(total) * total, 0.0)};
  for (std::size_t i = 0; i < B.a.size(); ++i) B.a[i] = T.a[i] + Aa.a[i];
  forward_solve(LH, B);
  // Right-multiply by L_W^{-T}: transpose, forward solve with L_W, transpose
  // back.
  Dense Bt{total, std::vector<double>(static_cast<std::size_t>(total) * total, 0.0)};
  for (int r = 0; r < total; ++r)
    for (int c = 0; c < total; ++c) Bt.at(c, r) = B.at(r, c);
  forward_solve(LW, Bt);
  for (int r = 0; r < total; ++r)
    for (int c = 0; c < total; ++c) B.at(r, c) = Bt.at(c, r);

  const std::vector<double> sv = singular_values(B);

  // Measured continuity constant of a(.,.): largest singular value of the
  // H-normalized a-form, refined per slab by power iteration on
  // (M+G)^{-1} G (self-adjoint in the H inner product).
  double gamma_a = 0.0;
  for (const Slab& s : slabs) {
    if (s.m == 0) continue;
    Dense Hm{s.m, std::vector<double>(static_cast<std::size_t>(s.m) * s.m, 0.0)};
    for (int i = 0; i < s.m; ++i) {
      Hm.at(i, i) = s.mass[static_cast<std::size_t>(i)];
      for (int j = 0; j < s.m; ++j) Hm.at(i, j) += s.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    cholesky(Hm);
    auto apply_G = [&](const std::vector<double>& v) {
      std::vector<double> Gv(static_cast<std::size_t>(s.m), 0.0);
      for (int i = 0; i < s.m; ++i)
        for (int j = 0; j < s.m; ++j)
          Gv[static_cast<std::size_t>(i)] += s.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
      return Gv;
    };
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> uni(0.1, 1.0);
    std::vector<double> v(static_cast<std::size_t>(s.m));
    for (auto& x : v) x = uni(rng);
    double lam = 0.0;
    for (int it = 0; it < 500; ++it) {
      // Power iteration on (M+G)^{-1} G, self-adjoint in the H inner product.
      std::vector<double> Gv = apply_G(v);
      std::vector<double> y = Gv;
      const int info = LAPACKE_dpotrs(LAPACK_COL_MAJOR, 'L', s.m, 1, Hm.a.data(),
                                      s.m, y.data(), s.m);
      if (info != 0) throw convergence_error("infsup: potrs failed");
      double num = 0.0, den = 0.0;
      for (int i = 0; i < s.m; ++i) {
        num += v[static_cast<std::size_t>(i)] * Gv[static_cast<std::size_t>(i)];
        den += v[static_cast<std::size_t>(i)] * (s.mass[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)] + Gv[static_cast<std::size_t>(i)]);
      }
      const double lam_new = num / den;
      double nrm = 0.0;
      for (double x : y) nrm = std::max(nrm, std::abs(x));
      for (double& x : y) x /= nrm;
      v = y;
      if (it > 5 && std::abs(lam_new - lam) < 1e-10 * std::abs(lam_new)) {
        lam = lam_new;
        break;
      }
      lam = lam_new;
    }
    gamma_a = std::max(gamma_a, lam);
  }

  InfSupResult res;
  res.unknowns = total;
  res.sigma_min = sv.empty() ? 0.0 : sv.back();
  res.sigma_max = sv.empty() ? 0.0 : sv.front();
  res.gamma_a = gamma_a;
  res.continuity_bound = std::sqrt(1.0 + gamma_a * gamma_a);
  return res;
}

}  // namespace

InfSupResult infsup_estimate(const LevelSetField& field, const BackgroundGrid& grid,
                             int n_slabs, int cap, Exec exec) {
  const double tau = (field.t_end - field.t_begin) / n_slabs;
  std::vector<Slab> slabs;
  std::vector<int> prev_local(static_cast<std::size_t>(grid.num_nodes()), -1);
  int total = 0;
  for (int n = 1; n <= n_slabs; ++n) {
    const double t = field.t_begin + n * tau;
    const DomainSlice slice = build_slice(field, grid, t, exec);
    const SliceOperators ops = assemble_operators(slice, /*dirichlet_cut=*/true);
    Slab s;
    s.m = static_cast<int>(ops.nodes.size());
    total += s.m;
    if (total > cap)
      throw argument_error("infsup_estimate: problem exceeds the dense cap of " +
                           std::to_string(cap) + " unknowns");
    s.mass = ops.mass;
    s.G.assign(static_cast<std::size_t>(s.m), std::vector<double>(static_cast<std::size_t>(s.m), 0.0));
    const Csr& G = ops.stiffness;
    for (int r = 0; r < s.m; ++r)
      for (int p = G.rowptr[static_cast<std::size_t>(r)]; p < G.rowptr[static_cast<std::size_t>(r) + 1]; ++p)
        s.G[static_cast<std::size_t>(r)][static_cast<std::size_t>(G.col[static_cast<std::size_t>(p)])] = G.val[static_cast<std::size_t>(p)];
    s.prev.assign(static_cast<std::size_t>(s.m), -1);
    if (n > 1)
      for (int i = 0; i < s.m; ++i)
        s.prev[static_cast<std::size_t>(i)] = prev_local[static_cast<std::size_t>(ops.nodes[static_cast<std::size_t>(i)])];
    std::fill(prev_local.begin(), prev_local.end(), -1);
    for (int i = 0; i < s.m; ++i) prev_local[static_cast<std::size_t>(ops.nodes[static_cast<std::size_t>(i)])] = i;
    slabs.push_back(std::move(s));
  }
  return assemble_and_analyze(slabs, tau);
}

InfSupResult infsup_estimate_interval1d(int n, int n_slabs, int cap) {
  if (n < 2 || n_slabs < 2) throw argument_error("infsup 1d: need n >= 2, n_slabs >= 2");
  if (n * n_slabs > cap)
    throw argument_error("infsup 1d: problem exceeds the dense cap");
  const double h = 1.0 / (n + 1);
  const double tau = 1.0 / n_slabs;
  std::vector<Slab> slabs(static_cast<std::size_t>(n_slabs));
  for (int k = 0; k < n_slabs; ++k) {
    Slab& s = slabs[static_cast<std::size_t>(k)];
    s.m = n;
    s.mass.assign(static_cast<std::size_t>(n), h);
    s.G.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
      s.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 2.0 / h;
      if (i > 0) s.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(i) - 1] = -1.0 / h;
      if (i + 1 < n) s.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(i) + 1] = -1.0 / h;
    }
    s.prev.assign(static_cast<std::size_t>(n), -1);
    if (k > 0)
      for (int i = 0; i < n; ++i) s.prev[static_cast<std::size_t>(i)] = i;
  }
  return assemble_and_analyze(slabs, tau);
}

}  // namespace mheat
