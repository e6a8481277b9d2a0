#include "mheat/morse.hpp"

#include <algorithm>
#include <cmath>

#include "mheat/errors.hpp"

namespace mheat {

const char* to_string(TransitionLabel label) {
  switch (label) {
    case TransitionLabel::IslandVanish: return "IslandVanish";
    case TransitionLabel::IslandCreate: return "IslandCreate";
    case TransitionLabel::Split: return "Split";
    case TransitionLabel::Merge: return "Merge";
    case TransitionLabel::HoleCreate: return "HoleCreate";
    case TransitionLabel::HoleVanish: return "HoleVanish";
    case TransitionLabel::HoleThroughCreate: return "HoleThroughCreate";
    case TransitionLabel::HoleThroughVanish: return "HoleThroughVanish";
    case TransitionLabel::VoidCreate: return "VoidCreate";
    case TransitionLabel::VoidVanish: return "VoidVanish";
    case TransitionLabel::Degenerate: return "Degenerate";
    case TransitionLabel::Stationary: return "Stationary";
  }
  return "?";
}

TransitionLabel classify_spectrum(std::array<double, 3> spectrum, double phi_t,
                                  int dim, double scale) {
  const double tol_eig = 1e-6;
  const double tol_t = 1e-8 * scale;
  double amax = 0.0, amin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim; ++i) {
    amax = std::max(amax, std::abs(spectrum[i]));
    amin = std::min(amin, std::abs(spectrum[i]));
  }
  if (!(amin > tol_eig * amax)) return TransitionLabel::Degenerate;
  if (std::abs(phi_t) < tol_t) return TransitionLabel::Stationary;

  int q = 0;  // negative eigenvalues
  for (int i = 0; i < dim; ++i)
    if (spectrum[i] < 0.0) ++q;
  const bool growing = phi_t > 0.0;  // phi increasing: subzero set locally shrinks

  if (q == 0) return growing ? TransitionLabel::IslandVanish : TransitionLabel::IslandCreate;
  if (q == 1) return growing ? TransitionLabel::Split : TransitionLabel::Merge;
  if (q == 2 && dim == 2)
    return growing ? TransitionLabel::HoleCreate : TransitionLabel::HoleVanish;
  if (q == 2 && dim == 3)
    return growing ? TransitionLabel::HoleThroughCreate : TransitionLabel::HoleThroughVanish;
  return growing ? TransitionLabel::VoidCreate : TransitionLabel::VoidVanish;
}

TransitionLabel classify(const CriticalPoint& cp, int dim) {
  return classify_spectrum(cp.spectrum, cp.phi_t, dim);
}

namespace {

struct Seed {
  Vec x;
  double t;
  double score;
};

// Newton iteration on F(x,t) = (grad phi, phi) in R^{dim+1}. The mixed block
// d(grad phi)/dt is finite-differenced; the Hessian and phi_t are analytic.
bool newton_root(const LevelSetField& field, Vec& x, double& t, double tol) {
  const int d = field.dim;
  const int n = d + 1;
  for (int it = 0; it < 80; ++it) {
    const Vec g = field.grad(x, t);
    const double phi = field.eval(x, t);
    double fn = std::abs(phi);
    for (int i = 0; i < d; ++i) fn = std::max(fn, std::abs(g[i]));
    if (fn < tol) return true;

    const Mat H = field.hess(x, t);
    const double dt = 1e-6 * (1.0 + std::abs(t));
    const Vec gp = field.grad(x, t + dt);
    const Vec gm = field.grad(x, t - dt);

    double A[16] = {0.0};
    double b[4] = {0.0};
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) A[i * n + j] = H[i][j];
      A[i * n + d] = (gp[i] - gm[i]) / (2.0 * dt);
      b[i] = -g[i];
    }
    for (int j = 0; j < d; ++j) A[d * n + j] = g[j];
    A[d * n + d] = field.dphi_dt(x, t);
    b[d] = -phi;

    if (!solve_small(n, A, b)) return false;
    double step = 0.0;
    for (int i = 0; i < d; ++i) {
      x[i] += b[i];
      step = std::max(step, std::abs(b[i]));
    }
    t += b[d];
    step = std::max(step, std::abs(b[d]));
    if (step > 1e3) return false;  // diverging
  }
  return false;
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(const LevelSetField& field,
                                                const SpaceTimeBox& box,
                                                int grid_density) {
  if (grid_density < 8) throw argument_error("find_critical_points: grid_density must be >= 8");
  const int d = field.dim;
  const int m = grid_density;
  const double tol_crit = 1e-8 * field.scale;
  const double newton_tol = 1e-12 * field.scale;

  // Score lattice over the space-time box.
  const int nt = m;
  const i64 total = (d == 2 ? i64(m) * m : i64(m) * m * m) * nt;
  std::vector<double> score(static_cast<std::size_t>(total));
  auto lattice_point = [&](i64 idx, Vec& x, double& t, int* ijk) {
    i64 r = idx;
    for (int ax = 0; ax < d; ++ax) {
      ijk[ax] = static_cast<int>(r % m);
      r /= m;
    }
    ijk[d] = static_cast<int>(r);
    for (int ax = 0; ax < d; ++ax)
      x[ax] = -box.a + 2.0 * box.a * ijk[ax] / (m - 1);
    x[2] = d == 2 ? 0.0 : x[2];
    t = box.t_begin + (box.t_end - box.t_begin) * ijk[d] / (nt - 1);
  };
  double smax = 0.0, smin = std::numeric_limits<double>::infinity();
  for (i64 idx = 0; idx < total; ++idx) {
    Vec x{0.0, 0.0, 0.0};
    double t;
    int ijk[4];
    lattice_point(idx, x, t, ijk);
    const Vec g = field.grad(x, t);
    const double s = norm(g, d) + std::abs(field.eval(x, t));
    score[static_cast<std::size_t>(idx)] = s;
    smax = std::max(smax, s);
    smin = std::min(smin, s);
  }
  const double screen = smin + 0.5 * (smax - smin);

  // Local minima of the score below the screen threshold become Newton seeds.
  std::vector<Seed> seeds;
  std::array<i64, 4> stride{};
  stride[0] = 1;
  for (int ax = 1; ax <= d; ++ax) stride[static_cast<std::size_t>(ax)] = stride[static_cast<std::size_t>(ax - 1)] * m;
  for (i64 idx = 0; idx < total; ++idx) {
    const double s = score[static_cast<std::size_t>(idx)];
    if (s >= screen) continue;
    Vec x{0.0, 0.0, 0.0};
    double t;
    int ijk[4];
    lattice_point(idx, x, t, ijk);
    bool is_min = true;
    for (int ax = 0; ax <= d && is_min; ++ax) {
      const int nax = ax < d ? m : nt;
      if (ijk[ax] > 0 && score[static_cast<std::size_t>(idx - stride[static_cast<std::size_t>(ax)])] < s) is_min = false;
      if (ijk[ax] + 1 < nax && score[static_cast<std::size_t>(idx + stride[static_cast<std::size_t>(ax)])] <= s) is_min = false;
    }
    if (is_min) seeds.push_back({x, t, s});
  }
  std::sort(seeds.begin(), seeds.end(),
            [](const Seed& a, const Seed& b) { return a.score < b.score; });
  if (seeds.size() > 128) seeds.resize(128);

  std::vector<CriticalPoint> found;
  const double margin = 1e-6;
  for (const Seed& seed : seeds) {
    Vec x = seed.x;
    double t = seed.t;
    if (!newton_root(field, x, t, newton_tol)) continue;
    bool inside = t >= box.t_begin - margin && t <= box.t_end + margin;
    for (int i = 0; i < d; ++i) inside = inside && std::abs(x[i]) <= box.a + margin;
    if (!inside) continue;

    const Vec g = field.grad(x, t);
    const double phi = field.eval(x, t);
    if (norm(g, d) >= tol_crit || std::abs(phi) >= tol_crit) continue;

    CriticalPoint cp;
    cp.x = x;
    cp.t = t;
    cp.res_grad = norm(g, d);
    cp.res_phi = std::abs(phi);
    cp.spectrum = sym_eigenvalues(field.hess(x, t), d);
    cp.phi_t = field.dphi_dt(x, t);
    cp.scenario = classify_spectrum(cp.spectrum, cp.phi_t, d, field.scale);
    cp.nondegenerate = cp.scenario != TransitionLabel::Degenerate;

    bool duplicate = false;
    for (auto& other : found) {
      double sep = std::abs(other.t - cp.t);
      for (int i = 0; i < d; ++i) sep = std::max(sep, std::abs(other.x[i] - cp.x[i]));
      if (sep < 10.0 * tol_crit) {
        duplicate = true;
        if (cp.res_grad + cp.res_phi < other.res_grad + other.res_phi) other = cp;
        break;
      }
    }
    if (!duplicate) found.push_back(cp);
  }

  std::sort(found.begin(), found.end(), [d](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.t != b.t) return a.t < b.t;
    for (int i = 0; i < d; ++i)
      if (a.x[i] != b.x[i]) return a.x[i] < b.x[i];
    return false;
  });
  return found;
}

}  // namespace mheat
