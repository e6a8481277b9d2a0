#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mheat/geom.hpp"

namespace mheat {

enum class FieldKind { analytic, normal_form };

// A space-time level set function phi(x, t) with its spatial derivatives and
// time derivative. The moving domain is the subzero set Omega(t) = {phi < 0}.
// Fields are closed-form evaluators, never sampled grids: downstream modules
// re-evaluate phi at their own points so the geometry carries no
// interpolation error.
struct LevelSetField {
  int dim = 2;  // 2 or 3
  double t_begin = -1.0;
  double t_end = 1.0;

  std::function<double(const Vec&, double)> eval;
  std::function<Vec(const Vec&, double)> grad;
  std::function<Mat(const Vec&, double)> hess;
  std::function<double(const Vec&, double)> dphi_dt;

  FieldKind kind = FieldKind::analytic;
  int q = -1;    // normal form: number of negative squares
  int sgn = 0;   // normal form: sign of the linear-in-time term
  bool fd_derivatives = false;  // derivatives come from finite differences
  double scale = 1.0;           // characteristic magnitude for tolerances
};

// Spatial box [-a, a]^dim crossed with a time interval. Domains handed to the
// grid-based modules are expected to stay inside the box; verify_containment
// checks phi >= 0 on the box faces at sampled times.
struct SpaceTimeBox {
  double a = 1.0;
  double t_begin = -1.0;
  double t_end = 1.0;
};

bool verify_containment(const LevelSetField& field, const SpaceTimeBox& box,
                        int samples_per_axis = 16, int time_samples = 9);

// Exact polynomial field -sum_{i<=q} x_i^2 + sum_{i>q} x_i^2 + sgn*t with
// analytic derivatives. Throws argument_error for invalid dim/q/sgn.
LevelSetField make_normal_form(int dim, int q, int sgn);

// Analytic field from user-supplied closed-form derivatives.
LevelSetField make_analytic_field(int dim, double t_begin, double t_end,
                                  std::function<double(const Vec&, double)> eval,
                                  std::function<Vec(const Vec&, double)> grad,
                                  std::function<Mat(const Vec&, double)> hess,
                                  std::function<double(const Vec&, double)> dphi_dt);

// Finite-difference fallback (central, step 1e-5*scale). Flagged via
// fd_derivatives: Hessian FD noise is too large for nondegeneracy tests.
LevelSetField make_analytic_field_fd(int dim, double t_begin, double t_end,
                                     std::function<double(const Vec&, double)> eval,
                                     double scale = 1.0);

// max(phi, |x|^2 - r0^2): restricts the subzero set to the open ball of
// radius r0. Used to keep catalog domains bounded inside the grid box.
LevelSetField windowed(const LevelSetField& field, double r0);

// --- Scenario catalog -------------------------------------------------------
// One named entry per transition type and time orientation.
struct ScenarioSpec {
  std::string name;
  int dim;
  int q;
  int sgn;
  double t_begin;
  double t_end;
};

std::span<const ScenarioSpec> scenario_catalog();
const ScenarioSpec& scenario_spec(const std::string& name);  // argument_error if unknown

// Raw normal form for the named scenario, with its catalog time interval.
LevelSetField make_scenario(const std::string& name);
// Catalog field windowed to the ball of radius 0.8*box_halfwidth, so Omega(t)
// is bounded inside the grid box (holes get a bounded complement).
LevelSetField make_scenario_windowed(const std::string& name, double box_halfwidth);

// --- Operations --------------------------------------------------------------

struct DerivativeReport {
  double max_grad_err = 0.0;
  double max_hess_err = 0.0;
  double max_dt_err = 0.0;
  bool fd_derivatives = false;  // field used the FD fallback
  double max() const;
};

// Compares the field's grad/hess/dphi_dt against central differences of eval
// at the given samples. Errors are normalized by max(1, |reference|).
DerivativeReport check_derivative_consistency(
    const LevelSetField& field, std::span<const std::pair<Vec, double>> samples,
    double step = 1e-4);

// Normal velocity of Gamma(t) at a boundary point:
//   V = -dphi_dt * grad(phi) / |grad(phi)|^2.
// Preconditions: |phi| < 1e-8*(1+|x|^2) (point on the surface) and
// |grad phi| > 1e-8 (away from the critical point, where the velocity blows up).
Vec normal_velocity(const LevelSetField& field, const Vec& x, double t);

}  // namespace mheat
