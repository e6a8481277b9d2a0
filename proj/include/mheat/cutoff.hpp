#pragma once

#include <functional>
#include <vector>

#include "mheat/levelset.hpp"
#include "mheat/slice.hpp"

namespace mheat {

// Smooth profile h with h = 0 on [0,1], h = 1 on [3,inf), 0 <= h <= 1 and
// |h'| <= 1: a quintic smoothstep mapped onto [1,3] (max slope 15/16).
// theta_eps(x,t) = h(-phi(x,t)/eps) cuts off near the lateral boundary.
struct CutoffProfile {
  double h(double r) const;
  double hprime(double r) const;
};

double theta(const LevelSetField& field, const CutoffProfile& profile, double eps,
             const Vec& x, double t);

struct SupportDistances {
  double d_in = 0.0;   // min space-time distance from supp(theta) to Gamma_Q
  double d_out = 0.0;  // max space-time distance from supp(1-theta) to Gamma_Q
  bool empty_support = false;
};

// Distances are measured between root-polished samples: facet vertices of the
// zero level (Gamma_Q) and of the shifted levels phi = -eps / phi = -3 eps
// (the support boundaries), at n_slabs slice times.
SupportDistances support_distances(const LevelSetField& field,
                                   const BackgroundGrid& grid, double eps,
                                   int n_slabs, Exec exec = Exec::par);

// ||(grad theta_eps) u||_Q per eps: space-time quadrature of
// (h'(-phi/eps)/eps)^2 |grad phi|^2 u^2 over n_slabs midpoint slabs.
std::vector<double> grad_theta_norm_sweep(
    const LevelSetField& field, const BackgroundGrid& grid,
    const std::function<double(const Vec&, double)>& u,
    const std::vector<double>& eps_list, int n_slabs = 64, Exec exec = Exec::par);

// eps^{-1} ||u||^2 over the strip Q_eps = {0 < -phi < 3 eps}, per eps.
std::vector<double> small_strip_mass(
    const LevelSetField& field, const BackgroundGrid& grid,
    const std::function<double(const Vec&, double)>& u,
    const std::vector<double>& eps_list, int n_slabs = 64, Exec exec = Exec::par);

struct CounterexampleRecord {
  double xi = 0.0;
  double numerator = 0.0;    // 2 pi xi^{-2} int_{sqrt(1+xi)}^{sqrt(1+3 xi)} y^3 ln^2 y dy
  double denominator = 0.0;  // 2 pi int_1^{sqrt(1+3 xi)} dy / y
  double ratio = 0.0;
};

// The rescaled radial quadratures behind the failure of a uniform cutoff
// bound in the hole case: the ratio grows like ln(xi). xi must lie in
// [10, 1e6].
std::vector<CounterexampleRecord> hole_counterexample(const std::vector<double>& xi_list);

}  // namespace mheat
