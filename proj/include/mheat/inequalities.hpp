#pragma once

#include <string>

#include "mheat/fdop.hpp"
#include "mheat/levelset.hpp"
#include "mheat/slice.hpp"

namespace mheat {

// One record from a best-constant estimation: the quantity, the sweep
// parameters it was computed at, the resolution, and the value.
struct ConstantEstimate {
  std::string quantity;  // poincare | trace_plain | trace_weighted | hardy
  double t = 0.0;        // slice time (poincare/trace)
  double a = 0.0, b = 0.0, p = 0.0;  // hardy parameters
  int n = 0;             // grid resolution
  double value = 0.0;
  int iterations = 0;
  bool extremizer_available = false;
};

// Best constant C_P in ||u|| <= C_P ||grad u|| on the slice at time t:
// inverse iteration for the smallest generalized eigenvalue of the cut-edge
// Dirichlet stiffness against the cut-cell mass, C_P = lambda_min^{-1/2}.
ConstantEstimate poincare_constant(const LevelSetField& field,
                                   const BackgroundGrid& grid, double t,
                                   Exec exec = Exec::par);

// Largest mu with ||u||^2_boundary <= mu * A(u), where A is the free H^1 form
// ||u||^2 + ||grad u||^2 (plain) or |t|^{-1/2}||u||^2 + |t|^{1/2}||grad u||^2
// (weighted, for the shrinking-ball cases). Power iteration on A^{-1} B with
// B the facet-interpolated boundary mass.
ConstantEstimate trace_constant(const LevelSetField& field,
                                const BackgroundGrid& grid, double t,
                                bool weighted, Exec exec = Exec::par);

// Largest mu with  int_a^b (u/(b-x))^2 x^p dx <= mu * int_a^b (u')^2 x^p dx
// over piecewise-linear u on n cells with u(b) = 0. The singular factor
// (b-x)^{-2} is integrated in closed form on every cell; x^p is frozen at
// cell midpoints, which keeps the (a,b,p) -> (a/b,1,p) rescaling exact.
ConstantEstimate hardy_constant(double a, double b, double p, int n);

// Tridiagonal matrices of the Hardy eigenproblem (exposed for oracle tests).
struct HardyMatrices {
  int m = 0;                      // free nodes (u(b) = 0 eliminated)
  std::vector<double> k_diag, k_off;  // stiffness
  std::vector<double> b_diag, b_off;  // singular-weight mass
};
HardyMatrices hardy_matrices(double a, double b, double p, int n);

}  // namespace mheat
