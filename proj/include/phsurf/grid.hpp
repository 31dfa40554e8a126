#ifndef PHSURF_GRID_HPP
#define PHSURF_GRID_HPP

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "phsurf/metric.hpp"

namespace phsurf {

enum class NodeKind { Interior, Boundary, Ghost };

struct GridNode {
  Complex pos;
  NodeKind kind = NodeKind::Interior;
  double theta = 0.0;  // boundary nodes: exact angle on the unit circle
};

/// Uniform Cartesian grid of spacing h = 2/n clipped to the closed unit disc.
/// Interior nodes are the lattice points strictly inside the circle; boundary
/// nodes are the circle crossings of lattice segments, snapped exactly onto
/// the circle and ordered by angle. Exterior lattice points are ghosts: they
/// carry no values and are never solved for.
struct DomainGrid {
  int n = 0;
  double h = 0.0;
  std::vector<GridNode> nodes;  // interior first, then boundary by angle
  int interiorCount = 0;
  int boundaryCount = 0;

  // 5-point stencil per interior node: W, E, S, N neighbor ids
  // (interior or boundary) and the axis distance to each.
  std::vector<std::array<int, 4>> nb5;
  std::vector<std::array<double, 4>> nbDist;
  // 9-point extension: SW, SE, NW, NE interior neighbor ids (-1 if absent).
  std::vector<std::array<int, 4>> nb9;

  // Nodal quadrature weights (boundary nodes carry zero weight; clipped
  // boundary-cell areas are folded into the adjacent interior weights).
  std::vector<double> quadWeight;

  // Closed boundary loop, node ids in increasing angle.
  std::vector<int> boundaryLoop;

  // Least-squares derivative extraction, exact on quadratics: one-sided at
  // boundary nodes, and at ring interior nodes whose crossing neighbors sit
  // closer than 0.6 h (plain difference stencils would amplify value noise
  // there by 1/distance^2). fitIndex is -1 where axis stencils are used.
  std::vector<int> fitIndex;
  std::vector<std::vector<int>> fitIds;
  std::vector<std::vector<double>> fitWx, fitWy;

  // Interior nodes whose four stencil distances are all >= 0.3 h; the
  // second-derivative certification checks measure on these.
  std::vector<std::uint8_t> healthyStencil;

  // Exact triangulation of the clipped domain, used by the variational
  // energy. alpha/beta give the per-triangle Wirtinger derivatives of the
  // affine interpolant: u_z = sum alpha[k] u_k, u_zbar = sum beta[k] u_k.
  struct Tri {
    int v[3];
    double area = 0.0;
    Complex alpha[3];
    Complex beta[3];
    Complex centroid;
  };
  std::vector<Tri> tris;

  int numNodes() const { return static_cast<int>(nodes.size()); }
  bool isInterior(int id) const { return id < interiorCount; }
  double boundaryLength() const { return 2.0 * M_PI; }
};

DomainGrid buildDiscGrid(int n);

/// Complex-valued nodal map into the target chart.
struct MapField {
  const DomainGrid* grid = nullptr;
  Eigen::ArrayXcd values;
};

MapField makeField(const DomainGrid& grid);
void setBoundaryValues(MapField& field,
                       const std::function<Complex(double)>& data);

struct WirtingerFields {
  Eigen::ArrayXcd uz;
  Eigen::ArrayXcd uzbar;
};

/// Nodal Wirtinger derivatives: central (distance-corrected) differences at
/// interior nodes, one-sided second-order least-squares fits on the boundary
/// ring. Exact on affine fields a z + b zbar + c.
WirtingerFields wirtinger(const MapField& field);

/// Nodal quadrature of f against dV = sigma dx dy.
double integrate(const DomainGrid& grid, const Eigen::ArrayXd& f,
                 const ConformalMetric& sigma);

/// 5-point Laplacian (distance-corrected near the ring), interior nodes only;
/// boundary entries are zero. Exact on quadratics.
Eigen::ArrayXd discreteLaplacian(const DomainGrid& grid,
                                 const Eigen::ArrayXd& f);
Eigen::ArrayXcd discreteLaplacian(const DomainGrid& grid,
                                  const Eigen::ArrayXcd& f);

/// Per-node evaluation helpers.
Eigen::ArrayXd evalOnNodes(const DomainGrid& grid,
                           const std::function<double(Complex)>& f);
Eigen::ArrayXcd evalOnNodesC(const DomainGrid& grid,
                             const std::function<Complex(Complex)>& f);

}  // namespace phsurf

#endif
