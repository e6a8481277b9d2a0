#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace mheat {

using i64 = std::int64_t;

// Spatial point/vector. Components at indices >= dim are kept at zero so the
// same type serves d = 2 and d = 3.
using Vec = std::array<double, 3>;
using Mat = std::array<std::array<double, 3>, 3>;

inline Vec vec2(double x, double y) { return {x, y, 0.0}; }
inline Vec vec3(double x, double y, double z) { return {x, y, z}; }

inline double dot(const Vec& a, const Vec& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a, int dim) { return std::sqrt(dot(a, a, dim)); }

inline Vec axpy(double alpha, const Vec& x, const Vec& y, int dim) {
  Vec r{0.0, 0.0, 0.0};
  for (int i = 0; i < dim; ++i) r[i] = alpha * x[i] + y[i];
  return r;
}

inline Vec scale(double alpha, const Vec& x, int dim) {
  Vec r{0.0, 0.0, 0.0};
  for (int i = 0; i < dim; ++i) r[i] = alpha * x[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b, int dim) {
  Vec r{0.0, 0.0, 0.0};
  for (int i = 0; i < dim; ++i) r[i] = a[i] - b[i];
  return r;
}

inline double dist(const Vec& a, const Vec& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Eigenvalues of a symmetric dim x dim matrix, sorted ascending.
// Cyclic Jacobi; plenty for the 2x2/3x3 Hessians this library needs.
std::array<double, 3> sym_eigenvalues(Mat m, int dim);

// Solve a small (<= 4x4) dense linear system in place with partial pivoting.
// Returns false when the pivot collapses (singular matrix).
bool solve_small(int n, double* A /* n*n row major */, double* b);

}  // namespace mheat
