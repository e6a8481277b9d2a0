#pragma once

#include "mheat/errors.hpp"
#include "mheat/geom.hpp"

namespace mheat {

// Uniform background grid with n nodes per axis covering [-a, a]^dim.
struct BackgroundGrid {
  int dim = 2;
  double a = 1.0;
  int n = 17;

  BackgroundGrid() = default;
  BackgroundGrid(int dim_, double a_, int n_) : dim(dim_), a(a_), n(n_) {
    if (dim != 2 && dim != 3) throw argument_error("grid: dim must be 2 or 3");
    if (!(a > 0.0)) throw argument_error("grid: halfwidth must be positive");
    if (n < 16) throw argument_error("grid: need at least 16 nodes per axis");
  }

  double h() const { return 2.0 * a / (n - 1); }
  i64 num_nodes() const { return dim == 2 ? i64(n) * n : i64(n) * n * n; }
  i64 num_cells() const {
    const i64 c = n - 1;
    return dim == 2 ? c * c : c * c * c;
  }

  i64 index(int i, int j, int k = 0) const {
    return dim == 2 ? i64(j) * n + i : (i64(k) * n + j) * n + i;
  }
  void unpack(i64 idx, int& i, int& j, int& k) const {
    i = static_cast<int>(idx % n);
    idx /= n;
    j = static_cast<int>(idx % n);
    k = dim == 2 ? 0 : static_cast<int>(idx / n);
  }
  double coord(int i) const { return -a + h() * i; }
  Vec node(i64 idx) const {
    int i, j, k;
    unpack(idx, i, j, k);
    return {coord(i), coord(j), dim == 2 ? 0.0 : coord(k)};
  }
};

}  // namespace mheat
