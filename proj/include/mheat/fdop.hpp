#pragma once

#include <functional>
#include <vector>

#include "mheat/parallel.hpp"
#include "mheat/slice.hpp"

namespace mheat {

struct Csr {
  int nrows = 0;
  std::vector<int> rowptr;
  std::vector<int> col;
  std::vector<double> val;
};

void spmv(const Csr& A, const std::vector<double>& x, std::vector<double>& y,
          Exec exec = Exec::par);

// Discrete operators on the active nodes of a slice, in local (compact)
// indexing. `mass` is the diagonal cut-cell mass (the slice quadrature
// weights). `stiffness` is the symmetric cut-edge Dirichlet energy
//   u^T G u  =  sum_{interior edges} (u_j - u_i)^2 h^{d-2}
//             + sum_{cut edges}      u_i^2 h^{d-2} / theta,
// i.e. a Shortley-Weller-type one-sided first difference toward the boundary.
// With dirichlet_cut = false the cut-edge terms are dropped (free H^1 energy,
// used by the trace eigenproblem).
struct SliceOperators {
  std::vector<i64> nodes;        // global node index per local dof
  std::vector<int> local;        // global -> local (-1 when inactive)
  std::vector<double> mass;      // diagonal, local indexing
  Csr stiffness;
  double h = 0.0;
  int dim = 2;
};

SliceOperators assemble_operators(const DomainSlice& slice, bool dirichlet_cut);

// First-order upwind discretization of div(u w), volume-scaled to match the
// stiffness rows. w is evaluated at face midpoints at the slice time.
Csr assemble_upwind_advection(const DomainSlice& slice, const SliceOperators& ops,
                              const std::function<Vec(const Vec&, double)>& w);

// Conjugate gradients with Jacobi preconditioning for y = (alpha*M + A)^{-1} b
// (A symmetric positive semidefinite, M diagonal). Relative tolerance on the
// residual. Throws convergence_error when the iteration cap is hit.
std::vector<double> cg_solve(const Csr& A, const std::vector<double>& diag_shift,
                             const std::vector<double>& b, double rel_tol,
                             int max_iter, Exec exec = Exec::par);

// BiCGStab for the nonsymmetric (advection) case; same conventions.
std::vector<double> bicgstab_solve(const Csr& A, const std::vector<double>& diag_shift,
                                   const std::vector<double>& b, double rel_tol,
                                   int max_iter, Exec exec = Exec::par);

}  // namespace mheat
