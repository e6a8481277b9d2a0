#pragma once

#include <vector>

#include "mheat/levelset.hpp"
#include "mheat/slice.hpp"
#include "mheat/solver.hpp"

namespace mheat {

struct InfSupResult {
  double sigma_min = 0.0;   // discrete inf-sup constant
  double sigma_max = 0.0;   // largest singular value of the normalized operator
  double gamma_a = 0.0;     // measured continuity bound of a(.,.) in the H norm
  double continuity_bound = 0.0;  // sqrt(1 + gamma_a^2)
  int unknowns = 0;
};

// Per-slab blocks of the discrete space-time operator B[u](v) = <du/dt, v> +
// a(u, v) on trial functions with zero initial trace, with the H- and W-Gram
// normalizations. sigma_min/sigma_max come from a dense SVD of
// L_W^{-1} B L_H^{-T}; gamma_a from per-slab power iteration on the
// normalized a-form. Problems above the unknown cap are rejected
// (argument_error) -- the dense route is for diagnostics, not production runs.
InfSupResult infsup_estimate(const LevelSetField& field, const BackgroundGrid& grid,
                             int n_slabs, int cap = 4000, Exec exec = Exec::par);

// Same diagnostic on the cylinder (0,1) x unit interval with the standard
// 1D three-point Laplacian: n interior nodes, n_slabs backward-Euler slabs.
InfSupResult infsup_estimate_interval1d(int n, int n_slabs, int cap = 4000);

}  // namespace mheat
