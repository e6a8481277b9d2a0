#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mheat/fdop.hpp"
#include "mheat/levelset.hpp"
#include "mheat/slice.hpp"

namespace mheat {

// a(u, v) = (grad u, grad v)_Q, optionally minus (u w, grad v)_Q realized as
// first-order upwind advection with the given velocity field w.
struct BilinearFormSpec {
  bool advection = false;
  std::function<Vec(const Vec&, double)> w;

  static BilinearFormSpec heat() { return {}; }
  static BilinearFormSpec advection_with(std::function<Vec(const Vec&, double)> vel) {
    BilinearFormSpec s;
    s.advection = true;
    s.w = std::move(vel);
    return s;
  }
};

// Reports max over sampled active nodes of dist(x, Gamma(t)) * |w(x, t)|,
// the quantity whose boundedness gives H-continuity of the advection form.
double continuity_weight_bound(const LevelSetField& field, const BackgroundGrid& grid,
                               int n_slabs, const std::function<Vec(const Vec&, double)>& w,
                               Exec exec = Exec::par);

struct SlabData {
  double t = 0.0;
  std::vector<i64> nodes;    // global node index per dof
  std::vector<double> mass;  // cut-cell mass diagonal
  std::vector<double> u;     // nodal values (zero extension elsewhere)
};

struct NormsRecord {
  double l2_Q = 0.0;      // ||u||_Q
  double grad_Q = 0.0;    // ||grad u||_Q
  double h = 0.0;         // (l2_Q^2 + grad_Q^2)^{1/2}
  double dual_ut = 0.0;   // ||du/dt||_{H^-1}
  double w = 0.0;         // (h^2 + dual_ut^2)^{1/2}
  double f_dual = 0.0;    // ||f||_{H^-1} via the same Riesz mechanism
};

struct SpaceTimeSolution {
  BackgroundGrid grid;
  double t0 = 0.0, t1 = 1.0;
  int n_slabs = 0;
  std::vector<SlabData> slabs;       // indices 0..n_slabs
  std::vector<double> slab_l2;       // ||u(t_n)||_{Omega(t_n)}
  std::vector<double> slab_l2_box;   // unweighted l2 of the zero extension
  NormsRecord norms;

  double tau() const { return (t1 - t0) / n_slabs; }
};

using SourceFn = std::function<double(const Vec&, double)>;
using InitialFn = std::function<double(const Vec&)>;

// Backward Euler on slices at the slab endpoints. Newly active nodes start
// from zero (zero extension); deactivated nodes are dropped. Per-slab linear
// systems are solved by CG (heat) or BiCGStab (advection) to relative
// tolerance 1e-10. All norms, including the Riesz-representer dual norms of
// du/dt and f, are accumulated during the sweep.
SpaceTimeSolution solve(const LevelSetField& field, const BackgroundGrid& grid,
                        int n_slabs, const SourceFn& f, const InitialFn& u0,
                        const BilinearFormSpec& form, Exec exec = Exec::par);

// Discrete space-time sample of an analytic function, with the same norm
// machinery as solve() (used for manufactured-field diagnostics).
SpaceTimeSolution sample_spacetime_field(const LevelSetField& field,
                                         const BackgroundGrid& grid, int n_slabs,
                                         const SourceFn& values, Exec exec = Exec::par);

double h_norm(const SpaceTimeSolution& sol);
double w_norm(const SpaceTimeSolution& sol);
double dual_norm_ut(const SpaceTimeSolution& sol);

// max_n ||u(t_n)|| / ||u||_W (the discrete trace-in-time quantity).
double trace_in_time_ratio(const SpaceTimeSolution& sol);

// L2(Q) distance between the solution and an exact field, by the slab rule.
double l2q_error(const SpaceTimeSolution& sol, const SourceFn& exact);

// Brute-force lower bound for ||du/dt||_{H^-1}: max over smoothed random test
// fields v of <du/dt, v> / ||v||_H. The Riesz value must dominate it.
double dual_norm_ut_sampled(const LevelSetField& field, const SpaceTimeSolution& sol,
                            int n_samples, unsigned long long seed,
                            Exec exec = Exec::par);

struct RefinementLevel {
  int n = 0;
  int n_slabs = 0;
};

// ||u||_W / ||f||_{H^-1} per refinement level (0 when both norms vanish).
std::vector<double> apriori_check(const LevelSetField& field, double box_halfwidth,
                                  std::vector<RefinementLevel> levels, const SourceFn& f,
                                  const BilinearFormSpec& form, Exec exec = Exec::par);

// Minimum over random discrete fields of a(u, g u) - c0_pred ||u||_H^2 with
// g(t) = exp(-gamma t) and c0_pred = (2 a^2 + 1)^{-1} min g (the enclosing-cube
// coercivity prediction).
double garding_check(const LevelSetField& field, const BackgroundGrid& grid,
                     int n_slabs, const BilinearFormSpec& form, double gamma,
                     int n_trials, unsigned long long seed, Exec exec = Exec::par);

// Residual of the discrete integration-by-parts identity
//   <u_t, v> + <v_t, u> = (u, v)_{Omega(T)} - (u, v)_{Omega(t0)}
// for nodal samples of two boundary-vanishing fields.
double partint_check(const LevelSetField& field, const BackgroundGrid& grid,
                     int n_slabs, const SourceFn& u_fn, const SourceFn& v_fn,
                     Exec exec = Exec::par);

}  // namespace mheat
