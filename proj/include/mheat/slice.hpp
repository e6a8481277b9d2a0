#pragma once

#include <array>
#include <functional>
#include <vector>

#include "mheat/grid.hpp"
#include "mheat/levelset.hpp"
#include "mheat/parallel.hpp"

namespace mheat {

// Boundary facet: a segment (2D, nv = 2) or triangle (3D, nv = 3) with
// root-polished vertices on Gamma(t).
struct Facet {
  std::array<Vec, 3> v{};
  int nv = 0;
  Vec centroid{0.0, 0.0, 0.0};
  double measure = 0.0;
};

// Discrete Omega(t) on a background grid. Nodes are active when
// phi < -1e-12*scale (strictly inside; near-zero nodes count as boundary).
// `cut[node][2*axis+side]` is the fraction theta in [theta_min, 1] of the grid
// edge from an active node to the interface in that direction (1 when the
// neighbor is active). `weight[node]` is the cut-cell quadrature weight
// h^dim * prod min(theta + 1/2, 1) over cut directions, zero at inactive
// nodes. `volume` is the measure of the polygonal/polyhedral subzero region
// recovered from the polished edge roots (second order), while weights give
// the first-order nodal rule used for field quadrature.
struct DomainSlice {
  BackgroundGrid grid;
  double time = 0.0;
  double scale = 1.0;
  std::vector<uint8_t> active;
  std::vector<std::array<double, 6>> cut;
  std::vector<double> weight;
  std::vector<Facet> facets;
  std::vector<int> component;  // -1 at inactive nodes, else component id
  int num_components = 0;
  double volume = 0.0;
  double boundary_measure = 0.0;
  i64 num_active = 0;

  bool empty() const { return num_active == 0; }
};

DomainSlice build_slice(const LevelSetField& field, const BackgroundGrid& grid,
                        double t, Exec exec = Exec::par);

int connected_components(const DomainSlice& slice);

// Complement components that do not touch the grid boundary: the discrete
// count of holes (2D) / enclosed voids (3D).
int bounded_complement_components(const DomainSlice& slice);

// Sum over active nodes of integrand(x) * weight (first-order cut-cell rule).
template <class F>
double volume_integral(const DomainSlice& slice, F&& integrand, Exec exec = Exec::par) {
  const auto& g = slice.grid;
  return reduce_sum(exec, g.num_nodes(), [&](i64 idx) {
    const double w = slice.weight[static_cast<std::size_t>(idx)];
    return w == 0.0 ? 0.0 : w * integrand(g.node(idx));
  });
}

// Sum over facets of integrand(centroid) * measure.
template <class F>
double boundary_integral(const DomainSlice& slice, F&& integrand, Exec exec = Exec::par) {
  return reduce_sum(exec, static_cast<i64>(slice.facets.size()), [&](i64 f) {
    const Facet& fc = slice.facets[static_cast<std::size_t>(f)];
    return fc.measure * integrand(fc.centroid);
  });
}

}  // namespace mheat
