#pragma once

#include <array>
#include <string>
#include <vector>

#include "mheat/levelset.hpp"

namespace mheat {

enum class TransitionLabel {
  IslandVanish,
  IslandCreate,
  Split,
  Merge,
  HoleCreate,
  HoleVanish,
  HoleThroughCreate,
  HoleThroughVanish,
  VoidCreate,
  VoidVanish,
  Degenerate,
  Stationary,
};

const char* to_string(TransitionLabel label);

struct CriticalPoint {
  Vec x{0.0, 0.0, 0.0};
  double t = 0.0;
  double res_grad = 0.0;  // |grad phi| at the reported point
  double res_phi = 0.0;   // |phi| at the reported point
  std::array<double, 3> spectrum{0.0, 0.0, 0.0};  // Hessian eigenvalues, ascending
  double phi_t = 0.0;
  bool nondegenerate = false;
  TransitionLabel scenario = TransitionLabel::Degenerate;
};

// Newton on the square system (grad phi, phi) = 0, seeded from local minima
// of |grad phi| + |phi| on a space-time lattice over the box. Converged roots
// are deduplicated (radius 10*tol_crit) and returned sorted by (t, x).
// Non-convergence from every seed yields an empty list; seeds with a singular
// Jacobian are skipped.
std::vector<CriticalPoint> find_critical_points(const LevelSetField& field,
                                                const SpaceTimeBox& box,
                                                int grid_density);

// Label from the sign pattern of the Hessian spectrum and the sign of phi_t.
// Degenerate Hessian -> Degenerate; |phi_t| below tolerance -> Stationary.
TransitionLabel classify_spectrum(std::array<double, 3> spectrum, double phi_t,
                                  int dim, double scale = 1.0);
TransitionLabel classify(const CriticalPoint& cp, int dim);

}  // namespace mheat
