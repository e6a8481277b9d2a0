#include "mheat/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mheat/errors.hpp"

namespace mheat {

double CutoffProfile::h(double r) const {
  if (r <= 1.0) return 0.0;
  if (r >= 3.0) return 1.0;
  const double z = 0.5 * (r - 1.0);
  return ((6.0 * z - 15.0) * z + 10.0) * z * z * z;
}

double CutoffProfile::hprime(double r) const {
  if (r <= 1.0 || r >= 3.0) return 0.0;
  const double z = 0.5 * (r - 1.0);
  return 0.5 * 30.0 * z * z * (z - 1.0) * (z - 1.0);
}

double theta(const LevelSetField& field, const CutoffProfile& profile, double eps,
             const Vec& x, double t) {
  if (!(eps > 0.0)) throw argument_error("theta: eps must be positive");
  return profile.h(-field.eval(x, t) / eps);
}

namespace {

// Space-time points on a level set {phi = level} sampled as facet vertices of
// the shifted field, over n_slabs slice times.
std::vector<std::array<double, 4>> level_vertices(const LevelSetField& field,
                                                  const BackgroundGrid& grid,
                                                  double level, int n_slabs,
                                                  Exec exec) {
  LevelSetField shifted = field;
  auto base = field.eval;
  shifted.eval = [base, level](const Vec& x, double t) { return base(x, t) - level; };
  // grad/hess/dphi_dt are unchanged by the constant shift.

  std::vector<std::array<double, 4>> pts;
  for (int k = 0; k <= n_slabs; ++k) {
    const double t = field.t_begin + (field.t_end - field.t_begin) * k / n_slabs;
    const DomainSlice slice = build_slice(shifted, grid, t, exec);
    for (const Facet& f : slice.facets)
      for (int v = 0; v < f.nv; ++v)
        pts.push_back({f.v[static_cast<std::size_t>(v)][0], f.v[static_cast<std::size_t>(v)][1],
                       f.v[static_cast<std::size_t>(v)][2], t});
  }
  return pts;
}

using Pt4 = std::array<double, 4>;

void sort_by_time(std::vector<Pt4>& pts) {
  std::sort(pts.begin(), pts.end(), [](const Pt4& a, const Pt4& b) {
    if (a[3] != b[3]) return a[3] < b[3];
    if (a[0] != b[0]) return a[0] < b[0];
    if (a[1] != b[1]) return a[1] < b[1];
    return a[2] < b[2];
  });
}

double sq_dist4(const Pt4& a, const Pt4& b) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Expanding search around the nearest time index; stops when the time gap
// alone exceeds the running bound.
template <class Visit>
void expand_in_time(const std::vector<Pt4>& B, double t, double& bound2, Visit&& visit) {
  const auto it = std::lower_bound(B.begin(), B.end(), t,
                                   [](const Pt4& p, double tv) { return p[3] < tv; });
  std::ptrdiff_t up = it - B.begin();
  std::ptrdiff_t down = up - 1;
  while (true) {
    bool progressed = false;
    if (up < static_cast<std::ptrdiff_t>(B.size())) {
      const double gap = B[static_cast<std::size_t>(up)][3] - t;
      if (gap * gap < bound2) {
        if (!visit(B[static_cast<std::size_t>(up)])) return;
        ++up;
        progressed = true;
      } else {
        up = static_cast<std::ptrdiff_t>(B.size());
      }
    }
    if (down >= 0) {
      const double gap = t - B[static_cast<std::size_t>(down)][3];
      if (gap * gap < bound2) {
        if (!visit(B[static_cast<std::size_t>(down)])) return;
        --down;
        progressed = true;
      } else {
        down = -1;
      }
    }
    if (!progressed) return;
  }
}

double min_pair_distance(const std::vector<Pt4>& A, const std::vector<Pt4>& B) {
  double best2 = std::numeric_limits<double>::infinity();
  for (const auto& a : A) {
    expand_in_time(B, a[3], best2, [&](const Pt4& b) {
      best2 = std::min(best2, sq_dist4(a, b));
      return true;
    });
  }
  return std::sqrt(best2);
}

// max over a in A of dist(a, B)
double hausdorff_one_sided(const std::vector<Pt4>& A, const std::vector<Pt4>& B) {
  double worst2 = 0.0;
  for (const auto& a : A) {
    double best2 = std::numeric_limits<double>::infinity();
    expand_in_time(B, a[3], best2, [&](const Pt4& b) {
      best2 = std::min(best2, sq_dist4(a, b));
      return best2 > worst2;  // below the running max: a cannot raise it
    });
    if (std::isfinite(best2)) worst2 = std::max(worst2, best2);
  }
  return std::sqrt(worst2);
}

}  // namespace

SupportDistances support_distances(const LevelSetField& field,
                                   const BackgroundGrid& grid, double eps,
                                   int n_slabs, Exec exec) {
  if (!(eps > 0.0)) throw argument_error("support_distances: eps must be positive");
  SupportDistances out;
  auto gamma = level_vertices(field, grid, 0.0, n_slabs, exec);
  // supp(theta) = {-phi >= eps}  -> boundary at phi = -eps
  auto inner = level_vertices(field, grid, -eps, n_slabs, exec);
  // supp(1-theta) = {-phi <= 3 eps} intersected with Q; its deepest points
  // sit on phi = -3 eps.
  auto deep = level_vertices(field, grid, -3.0 * eps, n_slabs, exec);
  sort_by_time(gamma);
  sort_by_time(inner);
  sort_by_time(deep);
  if (inner.empty() || gamma.empty()) {
    out.empty_support = true;
    return out;
  }
  out.d_in = min_pair_distance(inner, gamma);
  out.d_out = deep.empty() ? 0.0 : hausdorff_one_sided(deep, gamma);
  return out;
}

std::vector<double> grad_theta_norm_sweep(
    const LevelSetField& field, const BackgroundGrid& grid,
    const std::function<double(const Vec&, double)>& u,
    const std::vector<double>& eps_list, int n_slabs, Exec exec) {
  if (eps_list.empty()) throw argument_error("grad_theta_norm_sweep: empty eps list");
  n_slabs = std::max(n_slabs, 64);
  const CutoffProfile profile;
  std::vector<double> acc(eps_list.size(), 0.0);
  const double dt = (field.t_end - field.t_begin) / n_slabs;
  for (int k = 0; k < n_slabs; ++k) {
    const double t = field.t_begin + (k + 0.5) * dt;
    const DomainSlice slice = build_slice(field, grid, t, exec);
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
      const double eps = eps_list[e];
      acc[e] += dt * volume_integral(slice, [&](const Vec& x) {
        const double phi = field.eval(x, t);
        const double hp = profile.hprime(-phi / eps);
        if (hp == 0.0) return 0.0;
        const Vec g = field.grad(x, t);
        const double uu = u(x, t);
        return hp * hp / (eps * eps) * dot(g, g, field.dim) * uu * uu;
      }, exec);
    }
  }
  for (double& v : acc) v = std::sqrt(v);
  return acc;
}

std::vector<double> small_strip_mass(
    const LevelSetField& field, const BackgroundGrid& grid,
    const std::function<double(const Vec&, double)>& u,
    const std::vector<double>& eps_list, int n_slabs, Exec exec) {
  if (eps_list.empty()) throw argument_error("small_strip_mass: empty eps list");
  n_slabs = std::max(n_slabs, 64);
  std::vector<double> acc(eps_list.size(), 0.0);
  const double dt = (field.t_end - field.t_begin) / n_slabs;
  for (int k = 0; k < n_slabs; ++k) {
    const double t = field.t_begin + (k + 0.5) * dt;
    const DomainSlice slice = build_slice(field, grid, t, exec);
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
      const double eps = eps_list[e];
      acc[e] += dt * volume_integral(slice, [&](const Vec& x) {
        const double phi = field.eval(x, t);
        if (-phi >= 3.0 * eps) return 0.0;
        const double uu = u(x, t);
        return uu * uu;
      }, exec);
    }
  }
  for (std::size_t e = 0; e < eps_list.size(); ++e) acc[e] /= eps_list[e];
  return acc;
}

namespace {

// Composite 16-point Gauss-Legendre quadrature.
double gauss_integrate(double lo, double hi, int panels,
                       const std::function<double(double)>& f) {
  static const double xg[8] = {
      0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
      0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
      0.9445750230732326, 0.9894009349916499};
  static const double wg[8] = {
      0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
      0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
      0.0622535239386479, 0.0271524594117541};
  double sum = 0.0;
  const double len = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = lo + (p + 0.5) * len;
    const double hw = 0.5 * len;
    for (int g = 0; g < 8; ++g)
      sum += wg[g] * hw * (f(c - hw * xg[g]) + f(c + hw * xg[g]));
  }
  return sum;
}

}  // namespace

std::vector<CounterexampleRecord> hole_counterexample(const std::vector<double>& xi_list) {
  if (xi_list.empty()) throw argument_error("hole_counterexample: empty xi list");
  std::vector<CounterexampleRecord> out;
  out.reserve(xi_list.size());
  const double two_pi = 2.0 * std::acos(-1.0);
  for (const double xi : xi_list) {
    if (!(xi >= 10.0 && xi <= 1e6))
      throw argument_error("hole_counterexample: xi must lie in [10, 1e6]");
    CounterexampleRecord rec;
    rec.xi = xi;
    const double y_lo = std::sqrt(1.0 + xi);
    const double y_hi = std::sqrt(1.0 + 3.0 * xi);
    rec.numerator = two_pi / (xi * xi) *
                    gauss_integrate(y_lo, y_hi, 256, [](double y) {
                      const double l = std::log(y);
                      return y * y * y * l * l;
                    });
    rec.denominator = two_pi * gauss_integrate(1.0, y_hi, 256,
                                               [](double y) { return 1.0 / y; });
    rec.ratio = rec.numerator / rec.denominator;
    out.push_back(rec);
  }
  return out;
}

}  // namespace mheat
