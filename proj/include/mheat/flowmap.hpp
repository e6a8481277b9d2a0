#pragma once

#include <span>
#include <vector>

#include "mheat/levelset.hpp"
#include "mheat/morse.hpp"

namespace mheat {

struct Trajectory {
  Vec seed{0.0, 0.0, 0.0};
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<double> times;   // strictly monotone
  std::vector<Vec> points;     // same length as times
  double max_boundary_drift = 0.0;  // max |phi(x(t), t)| over samples
  bool truncated = false;      // integration stopped near a critical point
};

// Velocity field of the flow map:
//   V = -phi_t * grad(phi) / (|grad phi|^2 + phi^2).
// This is the unique sign making the zero level invariant; time direction is
// handled by the integration span. Throws degenerate_point_error when the
// denominator falls below 1e-12*scale^2 (only possible at the critical point).
Vec velocity_field(const LevelSetField& field, const Vec& x, double t);

// Classical RK4 with n_steps uniform steps from t_start to t_end (either
// direction). Trajectories that come within 1e-3 space-time distance of a
// point in `avoid` are truncated and flagged.
Trajectory advect(const LevelSetField& field, const Vec& seed, double t_start,
                  double t_end, int n_steps,
                  std::span<const CriticalPoint> avoid = {});

}  // namespace mheat
