#include "mheat/geom.hpp"

#include <algorithm>
#include <cmath>

namespace mheat {

std::array<double, 3> sym_eigenvalues(Mat m, int dim) {
  // Cyclic Jacobi rotations until off-diagonal mass is negligible.
  double off = 0.0, diag = 0.0;
  for (int i = 0; i < dim; ++i) {
    diag += std::abs(m[i][i]);
    for (int j = i + 1; j < dim; ++j) off += m[i][j] * m[i][j];
  }
  const double tol = 1e-30 * (1.0 + diag * diag);
  for (int sweep = 0; sweep < 64 && off > tol; ++sweep) {
    for (int p = 0; p < dim; ++p) {
      for (int q = p + 1; q < dim; ++q) {
        if (m[p][q] == 0.0) continue;
        const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < dim; ++k) {
          const double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (int k = 0; k < dim; ++k) {
          const double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
      }
    }
    off = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) off += m[i][j] * m[i][j];
  }
  std::array<double, 3> ev{0.0, 0.0, 0.0};
  for (int i = 0; i < dim; ++i) ev[static_cast<std::size_t>(i)] = m[i][i];
  std::sort(ev.begin(), ev.begin() + dim);
  return ev;
}

bool solve_small(int n, double* A, double* b) {
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(A[k * n + k]);
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(A[i * n + k]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < 1e-300) return false;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(A[k * n + j], A[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    const double inv = 1.0 / A[k * n + k];
    for (int i = k + 1; i < n; ++i) {
      const double f = A[i * n + k] * inv;
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) A[i * n + j] -= f * A[k * n + j];
      b[i] -= f * b[k];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    double s = b[k];
    for (int j = k + 1; j < n; ++j) s -= A[k * n + j] * b[j];
    b[k] = s / A[k * n + k];
  }
  return true;
}

}  // namespace mheat
