#include "mheat/slice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace mheat {

namespace {

constexpr double kThetaMin = 1e-3;  // clamp to bound cut-stencil condition numbers

Vec lerp(const Vec& p0, const Vec& p1, double s) {
  return {p0[0] + s * (p1[0] - p0[0]), p0[1] + s * (p1[1] - p0[1]),
          p0[2] + s * (p1[2] - p0[2])};
}

// Root of phi along the segment p0 -> p1 with phi(p0) < 0. Bisection plus a
// guarded Newton polish; parameter accurate to ~1e-12 so facet vertices sit
// on Gamma(t) well below the 1e-8 contract.
double segment_root(const LevelSetField& field, double t, const Vec& p0,
                    const Vec& p1, int dim) {
  if (field.eval(p1, t) <= 0.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (field.eval(lerp(p0, p1, mid), t) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double s = 0.5 * (lo + hi);
  const Vec dir = sub(p1, p0, dim);
  for (int it = 0; it < 4; ++it) {
    const Vec p = lerp(p0, p1, s);
    const double f = field.eval(p, t);
    const double df = dot(field.grad(p, t), dir, dim);
    if (df == 0.0) break;
    const double sn = s - f / df;
    if (!(sn > lo && sn < hi)) break;
    s = sn;
  }
  return s;
}

double tri_area(const Vec& a, const Vec& b, const Vec& c) {
  const double ux = b[0] - a[0], uy = b[1] - a[1];
  const double vx = c[0] - a[0], vy = c[1] - a[1];
  return 0.5 * std::abs(ux * vy - uy * vx);
}

double tet_volume(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
  const Vec u = sub(b, a, 3), v = sub(c, a, 3), w = sub(d, a, 3);
  const double det = u[0] * (v[1] * w[2] - v[2] * w[1]) -
                     u[1] * (v[0] * w[2] - v[2] * w[0]) +
                     u[2] * (v[0] * w[1] - v[1] * w[0]);
  return std::abs(det) / 6.0;
}

double tri_area3(const Vec& a, const Vec& b, const Vec& c) {
  const Vec u = sub(b, a, 3), v = sub(c, a, 3);
  const double cx = u[1] * v[2] - u[2] * v[1];
  const double cy = u[2] * v[0] - u[0] * v[2];
  const double cz = u[0] * v[1] - u[1] * v[0];
  return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

Facet make_segment(const Vec& a, const Vec& b) {
  Facet f;
  f.nv = 2;
  f.v[0] = a;
  f.v[1] = b;
  f.centroid = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.0};
  f.measure = std::hypot(b[0] - a[0], b[1] - a[1]);
  return f;
}

Facet make_triangle(const Vec& a, const Vec& b, const Vec& c) {
  Facet f;
  f.nv = 3;
  f.v[0] = a;
  f.v[1] = b;
  f.v[2] = c;
  f.centroid = {(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0,
                (a[2] + b[2] + c[2]) / 3.0};
  f.measure = tri_area3(a, b, c);
  return f;
}

// Area of the subzero part of a triangle whose edge crossings are already
// root-polished. in* flags come from the node mask.
double clipped_tri_area(const Vec& A, const Vec& B, const Vec& C, bool inA,
                        bool inB, bool inC, const LevelSetField& field, double t,
                        int dim) {
  const int count = int(inA) + int(inB) + int(inC);
  if (count == 0) return 0.0;
  if (count == 3) return tri_area(A, B, C);
  auto root = [&](const Vec& in, const Vec& out) {
    return lerp(in, out, segment_root(field, t, in, out, dim));
  };
  if (count == 1) {
    const Vec *a = &A, *b = &B, *c = &C;
    if (inB) { a = &B; b = &C; c = &A; }
    if (inC) { a = &C; b = &A; c = &B; }
    return tri_area(*a, root(*a, *b), root(*a, *c));
  }
  // count == 2: full triangle minus the corner at the outside vertex
  const Vec *out = &C, *p = &A, *q = &B;
  if (!inA) { out = &A; p = &B; q = &C; }
  if (!inB) { out = &B; p = &C; q = &A; }
  return tri_area(A, B, C) - tri_area(*out, root(*p, *out), root(*q, *out));
}

}  // namespace

DomainSlice build_slice(const LevelSetField& field, const BackgroundGrid& grid,
                        double t, Exec exec) {
  DomainSlice slice;
  slice.grid = grid;
  slice.time = t;
  slice.scale = field.scale;
  const int d = grid.dim;
  const int n = grid.n;
  const double h = grid.h();
  const i64 nn = grid.num_nodes();
  const double snap = 1e-12 * field.scale;

  // Node values and the active mask.
  std::vector<double> phi(static_cast<std::size_t>(nn));
  slice.active.assign(static_cast<std::size_t>(nn), 0);
  parallel_for(exec, nn, [&](i64 idx) {
    const double v = field.eval(grid.node(idx), t);
    phi[static_cast<std::size_t>(idx)] = v;
    slice.active[static_cast<std::size_t>(idx)] = v < -snap ? 1 : 0;
  });
  slice.num_active = static_cast<i64>(
      std::count(slice.active.begin(), slice.active.end(), uint8_t(1)));

  // Axis-edge interface crossings, parameter measured from the lower node.
  std::array<std::vector<double>, 3> eroot;
  for (int ax = 0; ax < d; ++ax) eroot[static_cast<std::size_t>(ax)].assign(static_cast<std::size_t>(nn), -1.0);
  for (int ax = 0; ax < d; ++ax) {
    auto& roots = eroot[static_cast<std::size_t>(ax)];
    parallel_for(exec, nn, [&](i64 idx) {
      int i, j, k;
      grid.unpack(idx, i, j, k);
      const int pos = ax == 0 ? i : (ax == 1 ? j : k);
      if (pos + 1 >= n) return;
      const i64 nb = idx + (ax == 0 ? 1 : (ax == 1 ? n : i64(n) * n));
      const bool a0 = slice.active[static_cast<std::size_t>(idx)] != 0;
      const bool a1 = slice.active[static_cast<std::size_t>(nb)] != 0;
      if (a0 == a1) return;
      const Vec p0 = grid.node(idx);
      const Vec p1 = grid.node(nb);
      const double s = a0 ? segment_root(field, t, p0, p1, d)
                          : 1.0 - segment_root(field, t, p1, p0, d);
      roots[static_cast<std::size_t>(idx)] = s;
    });
  }

  // Cut fractions and first-order cut-cell weights.
  slice.cut.assign(static_cast<std::size_t>(nn), {1.0, 1.0, 1.0, 1.0, 1.0, 1.0});
  slice.weight.assign(static_cast<std::size_t>(nn), 0.0);
  const double hd = d == 2 ? h * h : h * h * h;
  parallel_for(exec, nn, [&](i64 idx) {
    if (!slice.active[static_cast<std::size_t>(idx)]) return;
    int i, j, k;
    grid.unpack(idx, i, j, k);
    double w = hd;
    auto& cuts = slice.cut[static_cast<std::size_t>(idx)];
    for (int ax = 0; ax < d; ++ax) {
      const int pos = ax == 0 ? i : (ax == 1 ? j : k);
      const i64 step = ax == 0 ? 1 : (ax == 1 ? n : i64(n) * n);
      if (pos + 1 < n && !slice.active[static_cast<std::size_t>(idx + step)]) {
        const double s = eroot[static_cast<std::size_t>(ax)][static_cast<std::size_t>(idx)];
        const double theta = std::clamp(s, kThetaMin, 1.0);
        cuts[2 * ax] = theta;
        w *= std::min(theta + 0.5, 1.0);
      }
      if (pos > 0 && !slice.active[static_cast<std::size_t>(idx - step)]) {
        const double s = eroot[static_cast<std::size_t>(ax)][static_cast<std::size_t>(idx - step)];
        const double theta = std::clamp(1.0 - s, kThetaMin, 1.0);
        cuts[2 * ax + 1] = theta;
        w *= std::min(theta + 0.5, 1.0);
      }
    }
    slice.weight[static_cast<std::size_t>(idx)] = w;
  });

  // Facets and the polygonal measure, cell by cell. Per-thread facet buffers
  // are concatenated in thread order so the result is deterministic.
  const i64 ncells = grid.num_cells();
  const int nc = n - 1;
  const int nthreads = std::max(1, exec == Exec::seq ? 1 : max_threads());
  std::vector<std::vector<Facet>> fbuf(static_cast<std::size_t>(nthreads));
  std::vector<double> vbuf(static_cast<std::size_t>(nthreads), 0.0);

  auto cell_worker = [&](int tid, i64 lo, i64 hi) {
    auto& facets = fbuf[static_cast<std::size_t>(tid)];
    double vol = 0.0;
    for (i64 c = lo; c < hi; ++c) {
      int ci = static_cast<int>(c % nc);
      i64 r = c / nc;
      int cj = static_cast<int>(r % nc);
      int ck = d == 3 ? static_cast<int>(r / nc) : 0;

      if (d == 2) {
        const i64 i00 = grid.index(ci, cj);
        const i64 i10 = grid.index(ci + 1, cj);
        const i64 i11 = grid.index(ci + 1, cj + 1);
        const i64 i01 = grid.index(ci, cj + 1);
        const bool b0 = slice.active[static_cast<std::size_t>(i00)] != 0;
        const bool b1 = slice.active[static_cast<std::size_t>(i10)] != 0;
        const bool b2 = slice.active[static_cast<std::size_t>(i11)] != 0;
        const bool b3 = slice.active[static_cast<std::size_t>(i01)] != 0;
        const int inside = int(b0) + int(b1) + int(b2) + int(b3);
        if (inside == 0) continue;
        const Vec p00 = grid.node(i00), p10 = grid.node(i10);
        const Vec p11 = grid.node(i11), p01 = grid.node(i01);
        if (inside == 4) {
          vol += h * h;
          continue;
        }
        // Edge crossings: E0 bottom, E1 right, E2 top, E3 left.
        Vec rp[4];
        bool has[4] = {false, false, false, false};
        auto edge_point = [&](int ax, i64 lower, const Vec& pl, const Vec& pu) {
          const double s = eroot[static_cast<std::size_t>(ax)][static_cast<std::size_t>(lower)];
          return lerp(pl, pu, s);
        };
        if (b0 != b1) { rp[0] = edge_point(0, i00, p00, p10); has[0] = true; }
        if (b1 != b2) { rp[1] = edge_point(1, i10, p10, p11); has[1] = true; }
        if (b3 != b2) { rp[2] = edge_point(0, i01, p01, p11); has[2] = true; }
        if (b0 != b3) { rp[3] = edge_point(1, i00, p00, p01); has[3] = true; }

        const int ncross = int(has[0]) + int(has[1]) + int(has[2]) + int(has[3]);
        if (ncross == 4) {
          // Opposite-corner ambiguity; connectivity decided by the sign of
          // phi at the cell center.
          const Vec center{0.5 * (p00[0] + p11[0]), 0.5 * (p00[1] + p11[1]), 0.0};
          const bool center_in = field.eval(center, t) < 0.0;
          const bool diag_in = b0;  // b0 == b2, b1 == b3 in this case
          if (center_in == diag_in) {
            facets.push_back(make_segment(rp[0], rp[1]));
            facets.push_back(make_segment(rp[2], rp[3]));
          } else {
            facets.push_back(make_segment(rp[0], rp[3]));
            facets.push_back(make_segment(rp[1], rp[2]));
          }
        } else if (ncross == 2) {
          Vec a, b;
          bool first = true;
          for (int e = 0; e < 4; ++e) {
            if (!has[e]) continue;
            (first ? a : b) = rp[e];
            first = false;
          }
          facets.push_back(make_segment(a, b));
        }
        // Measure via two triangles split by the c00-c11 diagonal.
        vol += clipped_tri_area(p00, p10, p11, b0, b1, b2, field, t, d);
        vol += clipped_tri_area(p00, p11, p01, b0, b2, b3, field, t, d);
      } else {
        // Kuhn subdivision into 6 tetrahedra; conforming across cells.
        static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                        {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        i64 corner_idx[8];
        bool corner_in[8];
        Vec corner_p[8];
        bool any = false, all = true;
        for (int b = 0; b < 8; ++b) {
          const int di = b & 1, dj = (b >> 1) & 1, dk = (b >> 2) & 1;
          corner_idx[b] = grid.index(ci + di, cj + dj, ck + dk);
          corner_in[b] = slice.active[static_cast<std::size_t>(corner_idx[b])] != 0;
          corner_p[b] = grid.node(corner_idx[b]);
          any = any || corner_in[b];
          all = all && corner_in[b];
        }
        if (!any) continue;
        if (all) {
          vol += h * h * h;
          continue;
        }
        double cache[8][8];
        for (auto& row : cache)
          for (double& v : row) v = -1.0;
        auto root_point = [&](int ia, int ib) {  // ia inside, ib outside
          double s = cache[ia][ib];
          if (s < 0.0) {
            s = segment_root(field, t, corner_p[ia], corner_p[ib], 3);
            cache[ia][ib] = s;
          }
          return lerp(corner_p[ia], corner_p[ib], s);
        };
        for (const auto& perm : perms) {
          int v[4];
          v[0] = 0;
          int bits = 0;
          for (int s = 0; s < 3; ++s) {
            bits |= 1 << perm[s];
            v[s + 1] = bits;
          }
          const bool in[4] = {corner_in[v[0]], corner_in[v[1]], corner_in[v[2]],
                              corner_in[v[3]]};
          const int cnt = int(in[0]) + int(in[1]) + int(in[2]) + int(in[3]);
          if (cnt == 0) continue;
          const Vec P[4] = {corner_p[v[0]], corner_p[v[1]], corner_p[v[2]],
                            corner_p[v[3]]};
          if (cnt == 4) {
            vol += tet_volume(P[0], P[1], P[2], P[3]);
            continue;
          }
          int ins[4], outs[4], ni = 0, no = 0;
          for (int s = 0; s < 4; ++s) (in[s] ? ins[ni++] : outs[no++]) = s;
          if (cnt == 1) {
            const int A = ins[0];
            const Vec rB = root_point(v[A], v[outs[0]]);
            const Vec rC = root_point(v[A], v[outs[1]]);
            const Vec rD = root_point(v[A], v[outs[2]]);
            vol += tet_volume(P[A], rB, rC, rD);
            facets.push_back(make_triangle(rB, rC, rD));
          } else if (cnt == 3) {
            const int D = outs[0];
            const Vec rA = root_point(v[ins[0]], v[D]);
            const Vec rB = root_point(v[ins[1]], v[D]);
            const Vec rC = root_point(v[ins[2]], v[D]);
            vol += tet_volume(P[0], P[1], P[2], P[3]) -
                   tet_volume(P[D], rA, rB, rC);
            facets.push_back(make_triangle(rA, rB, rC));
          } else {
            const int A = ins[0], B = ins[1], C = outs[0], Dd = outs[1];
            const Vec rAC = root_point(v[A], v[C]);
            const Vec rAD = root_point(v[A], v[Dd]);
            const Vec rBC = root_point(v[B], v[C]);
            const Vec rBD = root_point(v[B], v[Dd]);
            vol += tet_volume(P[A], P[B], rBC, rBD);
            vol += tet_volume(P[A], rAC, rBC, rBD);
            vol += tet_volume(P[A], rAC, rAD, rBD);
            facets.push_back(make_triangle(rAC, rAD, rBD));
            facets.push_back(make_triangle(rAC, rBD, rBC));
          }
        }
      }
    }
    vbuf[static_cast<std::size_t>(tid)] = vol;
  };

  if (nthreads == 1) {
    cell_worker(0, 0, ncells);
  } else {
#ifdef _OPENMP
#pragma omp parallel num_threads(nthreads)
    {
      const int tid = omp_get_thread_num();
      i64 lo, hi;
      detail::chunk_range(ncells, nthreads, tid, lo, hi);
      cell_worker(tid, lo, hi);
    }
#else
    cell_worker(0, 0, ncells);
#endif
  }
  for (int tidx = 0; tidx < nthreads; ++tidx) {
    auto& buf = fbuf[static_cast<std::size_t>(tidx)];
    slice.facets.insert(slice.facets.end(), buf.begin(), buf.end());
    slice.volume += vbuf[static_cast<std::size_t>(tidx)];
  }
  for (const Facet& f : slice.facets) slice.boundary_measure += f.measure;

  // Connected components: label propagation in node-index order, so the
  // component with the lowest node index gets the lowest label.
  slice.component.assign(static_cast<std::size_t>(nn), -1);
  int comp = 0;
  std::deque<i64> queue;
  for (i64 start = 0; start < nn; ++start) {
    if (!slice.active[static_cast<std::size_t>(start)] || slice.component[static_cast<std::size_t>(start)] >= 0)
      continue;
    queue.push_back(start);
    slice.component[static_cast<std::size_t>(start)] = comp;
    while (!queue.empty()) {
      const i64 cur = queue.front();
      queue.pop_front();
      int i, j, k;
      grid.unpack(cur, i, j, k);
      const int pos[3] = {i, j, k};
      for (int ax = 0; ax < d; ++ax) {
        const i64 step = ax == 0 ? 1 : (ax == 1 ? n : i64(n) * n);
        for (int side = -1; side <= 1; side += 2) {
          const int p = pos[ax] + side;
          if (p < 0 || p >= n) continue;
          const i64 nb = cur + side * step;
          if (slice.active[static_cast<std::size_t>(nb)] && slice.component[static_cast<std::size_t>(nb)] < 0) {
            slice.component[static_cast<std::size_t>(nb)] = comp;
            queue.push_back(nb);
          }
        }
      }
    }
    ++comp;
  }
  slice.num_components = comp;
  return slice;
}

int connected_components(const DomainSlice& slice) { return slice.num_components; }

int bounded_complement_components(const DomainSlice& slice) {
  const auto& grid = slice.grid;
  const int d = grid.dim;
  const int n = grid.n;
  const i64 nn = grid.num_nodes();
  std::vector<int> label(static_cast<std::size_t>(nn), -1);
  int bounded = 0;
  std::deque<i64> queue;
  int comp = 0;
  for (i64 start = 0; start < nn; ++start) {
    if (slice.active[static_cast<std::size_t>(start)] || label[static_cast<std::size_t>(start)] >= 0) continue;
    bool touches = false;
    queue.push_back(start);
    label[static_cast<std::size_t>(start)] = comp;
    while (!queue.empty()) {
      const i64 cur = queue.front();
      queue.pop_front();
      int i, j, k;
      grid.unpack(cur, i, j, k);
      const int pos[3] = {i, j, k};
      for (int ax = 0; ax < d; ++ax) {
        if (pos[ax] == 0 || pos[ax] == n - 1) touches = true;
        const i64 step = ax == 0 ? 1 : (ax == 1 ? n : i64(n) * n);
        for (int side = -1; side <= 1; side += 2) {
          const int p = pos[ax] + side;
          if (p < 0 || p >= n) continue;
          const i64 nb = cur + side * step;
          if (!slice.active[static_cast<std::size_t>(nb)] && label[static_cast<std::size_t>(nb)] < 0) {
            label[static_cast<std::size_t>(nb)] = comp;
            queue.push_back(nb);
          }
        }
      }
    }
    if (!touches) ++bounded;
    ++comp;
  }
  return bounded;
}

}  // namespace mheat
