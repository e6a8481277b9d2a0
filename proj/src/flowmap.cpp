#include "mheat/flowmap.hpp"

#include <cmath>

#include "mheat/errors.hpp"

namespace mheat {

Vec velocity_field(const LevelSetField& field, const Vec& x, double t) {
  const Vec g = field.grad(x, t);
  const double phi = field.eval(x, t);
  const double denom = dot(g, g, field.dim) + phi * phi;
  const double tol_denom = 1e-12 * field.scale * field.scale;
  if (denom <= tol_denom)
    throw degenerate_point_error("velocity_field: |grad phi|^2 + phi^2 vanishes");
  const double pt = field.dphi_dt(x, t);
  return scale(-pt / denom, g, field.dim);
}

Trajectory advect(const LevelSetField& field, const Vec& seed, double t_start,
                  double t_end, int n_steps, std::span<const CriticalPoint> avoid) {
  if (n_steps < 1) throw argument_error("advect: n_steps must be >= 1");
  if (t_end == t_start) throw argument_error("advect: degenerate time span");

  Trajectory traj;
  traj.seed = seed;
  traj.t_start = t_start;
  traj.t_end = t_end;
  traj.times.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.points.reserve(static_cast<std::size_t>(n_steps) + 1);

  const int d = field.dim;
  const double dt = (t_end - t_start) / n_steps;
  Vec x = seed;
  double t = t_start;

  auto near_critical = [&](const Vec& p, double tp) {
    for (const CriticalPoint& cp : avoid) {
      double s = (tp - cp.t) * (tp - cp.t);
      for (int i = 0; i < d; ++i) s += (p[i] - cp.x[i]) * (p[i] - cp.x[i]);
      if (s < 1e-3 * 1e-3) return true;
    }
    return false;
  };

  auto record = [&](const Vec& p, double tp) {
    traj.times.push_back(tp);
    traj.points.push_back(p);
    traj.max_boundary_drift =
        std::max(traj.max_boundary_drift, std::abs(field.eval(p, tp)));
  };
  record(x, t);

  for (int step = 0; step < n_steps; ++step) {
    if (near_critical(x, t)) {
      traj.truncated = true;
      break;
    }
    const Vec k1 = velocity_field(field, x, t);
    const Vec k2 = velocity_field(field, axpy(0.5 * dt, k1, x, d), t + 0.5 * dt);
    const Vec k3 = velocity_field(field, axpy(0.5 * dt, k2, x, d), t + 0.5 * dt);
    const Vec k4 = velocity_field(field, axpy(dt, k3, x, d), t + dt);
    for (int i = 0; i < d; ++i)
      x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t = t_start + (step + 1) * dt;
    record(x, t);
  }
  return traj;
}

}  // namespace mheat
