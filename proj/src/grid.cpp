#include "phsurf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace phsurf {

namespace {

constexpr double kInsideEps = 0.0;  // strict |z| < 1 decides interior

bool insideDisc(Complex p) { return std::norm(p) < 1.0 - kInsideEps; }

/// Circle crossings of the segment p -> q, as parameters in [0, 1].
std::vector<double> segmentCrossings(Complex p, Complex q) {
  const Complex d = q - p;
  const double a = std::norm(d);
  const double b = 2.0 * (p.real() * d.real() + p.imag() * d.imag());
  const double c = std::norm(p) - 1.0;
  std::vector<double> out;
  if (a == 0.0) return out;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 1e-28) return out;  // miss or grazing touch
  const double sq = std::sqrt(disc);
  for (double tau : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
    if (tau >= -1e-12 && tau <= 1.0 + 1e-12)
      out.push_back(std::clamp(tau, 0.0, 1.0));
  }
  std::sort(out.begin(), out.end());
  if (out.size() == 2 && out[1] - out[0] < 1e-12) out.pop_back();
  return out;
}

struct PosKey {
  long long x, y;
  bool operator<(const PosKey& o) const {
    return x != o.x ? x < o.x : y < o.y;
  }
};

PosKey keyOf(Complex p) {
  return {llround(p.real() * 1e9), llround(p.imag() * 1e9)};
}

}  // namespace

DomainGrid buildDiscGrid(int n) {
  if (n < 8) throw std::invalid_argument("buildDiscGrid: n must be >= 8");
  DomainGrid g;
  g.n = n;
  g.h = 2.0 / n;
  const double h = g.h;
  const int iMax = static_cast<int>(std::floor(1.0 / h)) + 1;

  const auto lat = [&](int i, int j) { return Complex(i * h, j * h); };

  // Interior nodes in deterministic scan order.
  std::map<std::pair<int, int>, int> latticeId;
  for (int j = -iMax; j <= iMax; ++j) {
    for (int i = -iMax; i <= iMax; ++i) {
      const Complex p = lat(i, j);
      if (insideDisc(p)) {
        latticeId[{i, j}] = static_cast<int>(g.nodes.size());
        g.nodes.push_back({p, NodeKind::Interior, 0.0});
      }
    }
  }
  g.interiorCount = static_cast<int>(g.nodes.size());

  // Boundary nodes: circle crossings of lattice segments, deduped, then
  // sorted by angle. Crossings are recorded per edge for stencil and cell
  // polygon lookup. Edge key: (0 horizontal / 1 vertical, i, j).
  struct EdgeCross {
    std::vector<double> taus;
    std::vector<int> ids;
  };
  std::map<std::tuple<int, int, int>, EdgeCross> edgeCross;
  std::map<PosKey, int> bndByPos;
  std::vector<Complex> bndPos;

  const auto recordEdge = [&](int kind, int i, int j, Complex p, Complex q) {
    const auto taus = segmentCrossings(p, q);
    if (taus.empty()) return;
    EdgeCross ec;
    for (double tau : taus) {
      Complex pt = p + tau * (q - p);
      pt /= std::abs(pt);  // snap exactly onto the circle
      const PosKey key = keyOf(pt);
      auto it = bndByPos.find(key);
      int id;
      if (it == bndByPos.end()) {
        id = static_cast<int>(bndPos.size());
        bndByPos[key] = id;
        bndPos.push_back(pt);
      } else {
        id = it->second;
      }
      ec.taus.push_back(tau);
      ec.ids.push_back(id);
    }
    edgeCross[{kind, i, j}] = ec;
  };

  for (int j = -iMax; j <= iMax; ++j)
    for (int i = -iMax; i <= iMax; ++i) {
      recordEdge(0, i, j, lat(i, j), lat(i + 1, j));
      recordEdge(1, i, j, lat(i, j), lat(i, j + 1));
    }

  // Sort boundary nodes by angle; build id remap.
  std::vector<int> order(bndPos.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  const auto angleOf = [&](int id) {
    double th = std::atan2(bndPos[id].imag(), bndPos[id].real());
    if (th < 0.0) th += 2.0 * M_PI;
    return th;
  };
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return angleOf(a) < angleOf(b); });
  std::vector<int> remap(bndPos.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    remap[order[k]] = g.interiorCount + static_cast<int>(k);
    g.nodes.push_back({bndPos[order[k]], NodeKind::Boundary, angleOf(order[k])});
  }
  g.boundaryCount = static_cast<int>(bndPos.size());
  for (auto& [key, ec] : edgeCross)
    for (auto& id : ec.ids) id = remap[id];
  for (int k = 0; k < g.boundaryCount; ++k)
    g.boundaryLoop.push_back(g.interiorCount + k);

  // 5- and 9-point stencils for interior nodes.
  g.nb5.assign(g.interiorCount, {-1, -1, -1, -1});
  g.nbDist.assign(g.interiorCount, {h, h, h, h});
  g.nb9.assign(g.interiorCount, {-1, -1, -1, -1});
  const auto crossingToward = [&](int i, int j, int di, int dj) -> std::pair<int, double> {
    // The crossing on the segment from inside node (i,j) toward (i+di,j+dj).
    int kind, ei, ej;
    bool forward;
    if (dj == 0) {
      kind = 0;
      ei = (di > 0) ? i : i - 1;
      ej = j;
      forward = di > 0;
    } else {
      kind = 1;
      ei = i;
      ej = (dj > 0) ? j : j - 1;
      forward = dj > 0;
    }
    auto it = edgeCross.find({kind, ei, ej});
    if (it == edgeCross.end() || it->second.taus.empty()) return {-1, h};
    const auto& ec = it->second;
    // Segment parameter of the node itself along the canonical edge.
    if (forward) {
      return {ec.ids.front(), ec.taus.front() * h};
    }
    return {ec.ids.back(), (1.0 - ec.taus.back()) * h};
  };

  for (const auto& [ij, id] : latticeId) {
    const auto [i, j] = ij;
    const int dirs[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};  // W E S N
    for (int d = 0; d < 4; ++d) {
      auto it = latticeId.find({i + dirs[d][0], j + dirs[d][1]});
      if (it != latticeId.end()) {
        g.nb5[id][d] = it->second;
        g.nbDist[id][d] = h;
      } else {
        const auto [bid, dist] = crossingToward(i, j, dirs[d][0], dirs[d][1]);
        if (bid < 0)
          throw std::logic_error("buildDiscGrid: missing boundary crossing");
        g.nb5[id][d] = bid;
        g.nbDist[id][d] = dist;
      }
    }
    const int diag[4][2] = {{-1, -1}, {1, -1}, {-1, 1}, {1, 1}};  // SW SE NW NE
    for (int d = 0; d < 4; ++d) {
      auto it = latticeId.find({i + diag[d][0], j + diag[d][1]});
      g.nb9[id][d] = (it != latticeId.end()) ? it->second : -1;
    }
  }

  // Quadrature weights: h^2 per interior node, boundary cells clipped by
  // midpoint subsampling, outside-cell remainders folded onto the nearest
  // interior lattice neighbor.
  g.quadWeight.assign(g.numNodes(), 0.0);
  const auto clippedArea = [&](Complex center) -> double {
    const double half = 0.5 * h;
    const double r = std::abs(center);
    if (r + half * std::sqrt(2.0) <= 1.0) return h * h;
    if (r - half * std::sqrt(2.0) >= 1.0) return 0.0;
    const int m = 32;
    int count = 0;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const Complex p(center.real() - half + (a + 0.5) * h / m,
                        center.imag() - half + (b + 0.5) * h / m);
        if (std::norm(p) < 1.0) ++count;
      }
    return h * h * count / double(m * m);
  };
  for (int j = -iMax - 1; j <= iMax + 1; ++j) {
    for (int i = -iMax - 1; i <= iMax + 1; ++i) {
      const double area = clippedArea(lat(i, j));
      if (area <= 0.0) continue;
      auto it = latticeId.find({i, j});
      if (it != latticeId.end()) {
        g.quadWeight[it->second] += area;
        continue;
      }
      const int near[8][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1},
                              {-1, -1}, {1, -1}, {-1, 1}, {1, 1}};
      for (const auto& d : near) {
        auto nb = latticeId.find({i + d[0], j + d[1]});
        if (nb != latticeId.end()) {
          g.quadWeight[nb->second] += area;
          break;
        }
      }
    }
  }

  // Triangulation of the clipped cells. Cell (i,j) spans lat(i,j)..lat(i+1,j+1);
  // its polygon is the CCW walk of inside corners and circle crossings.
  const auto edgePoints = [&](int kind, int i, int j, bool forward,
                              std::vector<std::pair<Complex, int>>& out) {
    const Complex p = lat(i, j);
    const Complex q = (kind == 0) ? lat(i + 1, j) : lat(i, j + 1);
    const Complex start = forward ? p : q;
    auto itc = edgeCross.find({kind, i, j});
    // Emit the starting corner if inside.
    const int si = forward ? i : (kind == 0 ? i + 1 : i);
    const int sj = forward ? j : (kind == 0 ? j : j + 1);
    auto itl = latticeId.find({si, sj});
    if (itl != latticeId.end()) out.push_back({start, itl->second});
    if (itc != edgeCross.end()) {
      const auto& ec = itc->second;
      if (forward) {
        for (std::size_t k = 0; k < ec.taus.size(); ++k)
          out.push_back({g.nodes[ec.ids[k]].pos, ec.ids[k]});
      } else {
        for (std::size_t k = ec.taus.size(); k-- > 0;)
          out.push_back({g.nodes[ec.ids[k]].pos, ec.ids[k]});
      }
    }
  };

  for (int j = -iMax - 1; j <= iMax; ++j) {
    for (int i = -iMax - 1; i <= iMax; ++i) {
      std::vector<std::pair<Complex, int>> poly;
      edgePoints(0, i, j, true, poly);          // bottom, left to right
      edgePoints(1, i + 1, j, true, poly);      // right, bottom to top
      edgePoints(0, i, j + 1, false, poly);     // top, right to left
      edgePoints(1, i, j, false, poly);         // left, top to bottom
      // Remove consecutive duplicates (shared corners/crossings).
      std::vector<std::pair<Complex, int>> clean;
      for (const auto& v : poly) {
        if (clean.empty() || clean.back().second != v.second) clean.push_back(v);
      }
      while (clean.size() > 1 && clean.front().second == clean.back().second)
        clean.pop_back();
      if (clean.size() < 3) continue;
      // Keep only polygons with at least one interior vertex (skips slivers
      // with no degrees of freedom).
      bool hasInterior = false;
      for (const auto& v : clean) hasInterior |= g.isInterior(v.second);
      if (!hasInterior) continue;
      for (std::size_t k = 1; k + 1 < clean.size(); ++k) {
        DomainGrid::Tri tri;
        tri.v[0] = clean[0].second;
        tri.v[1] = clean[k].second;
        tri.v[2] = clean[k + 1].second;
        const Complex z0 = clean[0].first, z1 = clean[k].first,
                      z2 = clean[k + 1].first;
        const Complex d1 = z1 - z0, d2 = z2 - z0;
        const double signedArea =
            0.5 * (d1.real() * d2.imag() - d1.imag() * d2.real());
        if (signedArea < 1e-13 * h * h) continue;  // degenerate sliver
        tri.area = signedArea;
        const Complex D = d1 * std::conj(d2) - d2 * std::conj(d1);
        tri.alpha[0] = std::conj(d1 - d2) / D;
        tri.alpha[1] = std::conj(d2) / D;
        tri.alpha[2] = -std::conj(d1) / D;
        tri.beta[0] = (d2 - d1) / D;
        tri.beta[1] = -d2 / D;
        tri.beta[2] = d1 / D;
        tri.centroid = (z0 + z1 + z2) / 3.0;
        g.tris.push_back(tri);
      }
    }
  }

  // Least-squares derivative weights (quadratic model in h-scaled
  // coordinates) at boundary nodes and at ill-conditioned ring nodes.
  g.fitIndex.assign(g.numNodes(), -1);
  g.healthyStencil.assign(g.interiorCount, 1);
  std::vector<int> fitNodes;
  for (int id = 0; id < g.interiorCount; ++id) {
    double dmin = h;
    for (int d = 0; d < 4; ++d) dmin = std::min(dmin, g.nbDist[id][d]);
    if (dmin < 0.3 * h) g.healthyStencil[id] = 0;
    if (dmin < 0.6 * h) fitNodes.push_back(id);
  }
  for (int k = 0; k < g.boundaryCount; ++k) fitNodes.push_back(g.interiorCount + k);

  for (const int id : fitNodes) {
    const Complex pb = g.nodes[id].pos;
    double radius = 2.6 * h;
    std::vector<int> ids;
    for (int attempt = 0; attempt < 4; ++attempt) {
      ids.clear();
      for (int m = 0; m < g.numNodes(); ++m) {
        if (std::abs(g.nodes[m].pos - pb) <= radius) ids.push_back(m);
      }
      if (static_cast<int>(ids.size()) >= 9) break;
      radius *= 1.4;
    }
    Eigen::MatrixXd A(ids.size(), 6);
    for (std::size_t r = 0; r < ids.size(); ++r) {
      const Complex d = (g.nodes[ids[r]].pos - pb) / h;
      const double xi = d.real(), eta = d.imag();
      A(r, 0) = 1.0;
      A(r, 1) = xi;
      A(r, 2) = eta;
      A(r, 3) = xi * xi;
      A(r, 4) = xi * eta;
      A(r, 5) = eta * eta;
    }
    const Eigen::MatrixXd pinv =
        A.completeOrthogonalDecomposition().pseudoInverse();
    g.fitIndex[id] = static_cast<int>(g.fitIds.size());
    std::vector<double> wx(ids.size()), wy(ids.size());
    for (std::size_t r = 0; r < ids.size(); ++r) {
      wx[r] = pinv(1, r) / h;
      wy[r] = pinv(2, r) / h;
    }
    g.fitIds.push_back(std::move(ids));
    g.fitWx.push_back(std::move(wx));
    g.fitWy.push_back(std::move(wy));
  }

  return g;
}

MapField makeField(const DomainGrid& grid) {
  MapField f;
  f.grid = &grid;
  f.values = Eigen::ArrayXcd::Zero(grid.numNodes());
  return f;
}

void setBoundaryValues(MapField& field,
                       const std::function<Complex(double)>& data) {
  const DomainGrid& g = *field.grid;
  for (int id : g.boundaryLoop) field.values[id] = data(g.nodes[id].theta);
}

namespace {

/// Non-uniform first derivative: samples at -a (lo), 0, +b (hi).
inline Complex d1(Complex lo, Complex c, Complex hi, double a, double b) {
  return (-b / (a * (a + b))) * lo + ((b - a) / (a * b)) * c +
         (a / (b * (a + b))) * hi;
}

/// Non-uniform second derivative, exact on quadratics.
inline Complex d2(Complex lo, Complex c, Complex hi, double a, double b) {
  return 2.0 * (lo / (a * (a + b)) - c / (a * b) + hi / (b * (a + b)));
}

}  // namespace

WirtingerFields wirtinger(const MapField& field) {
  const DomainGrid& g = *field.grid;
  const auto& u = field.values;
  WirtingerFields w;
  w.uz = Eigen::ArrayXcd::Zero(g.numNodes());
  w.uzbar = Eigen::ArrayXcd::Zero(g.numNodes());
  for (int id = 0; id < g.numNodes(); ++id) {
    Complex ux{0, 0}, uy{0, 0};
    const int fi = g.fitIndex[id];
    if (fi >= 0) {
      const auto& ids = g.fitIds[fi];
      for (std::size_t r = 0; r < ids.size(); ++r) {
        ux += g.fitWx[fi][r] * u[ids[r]];
        uy += g.fitWy[fi][r] * u[ids[r]];
      }
    } else if (g.isInterior(id)) {
      const auto& nb = g.nb5[id];
      const auto& dd = g.nbDist[id];
      ux = d1(u[nb[0]], u[id], u[nb[1]], dd[0], dd[1]);
      uy = d1(u[nb[2]], u[id], u[nb[3]], dd[2], dd[3]);
    }
    w.uz[id] = 0.5 * (ux - Complex{0, 1} * uy);
    w.uzbar[id] = 0.5 * (ux + Complex{0, 1} * uy);
  }
  return w;
}

double integrate(const DomainGrid& grid, const Eigen::ArrayXd& f,
                 const ConformalMetric& sigma) {
  double sum = 0.0;
  for (int id = 0; id < grid.interiorCount; ++id) {
    if (grid.quadWeight[id] == 0.0) continue;
    sum += grid.quadWeight[id] * f[id] * sigma.eval(grid.nodes[id].pos);
  }
  return sum;
}

Eigen::ArrayXd discreteLaplacian(const DomainGrid& grid,
                                 const Eigen::ArrayXd& f) {
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(grid.numNodes());
  for (int id = 0; id < grid.interiorCount; ++id) {
    const auto& nb = grid.nb5[id];
    const auto& dd = grid.nbDist[id];
    const auto dxx = 2.0 * (f[nb[0]] / (dd[0] * (dd[0] + dd[1])) -
                            f[id] / (dd[0] * dd[1]) +
                            f[nb[1]] / (dd[1] * (dd[0] + dd[1])));
    const auto dyy = 2.0 * (f[nb[2]] / (dd[2] * (dd[2] + dd[3])) -
                            f[id] / (dd[2] * dd[3]) +
                            f[nb[3]] / (dd[3] * (dd[2] + dd[3])));
    out[id] = dxx + dyy;
  }
  return out;
}

Eigen::ArrayXcd discreteLaplacian(const DomainGrid& grid,
                                  const Eigen::ArrayXcd& f) {
  Eigen::ArrayXcd out = Eigen::ArrayXcd::Zero(grid.numNodes());
  for (int id = 0; id < grid.interiorCount; ++id) {
    const auto& nb = grid.nb5[id];
    const auto& dd = grid.nbDist[id];
    out[id] = d2(f[nb[0]], f[id], f[nb[1]], dd[0], dd[1]) +
              d2(f[nb[2]], f[id], f[nb[3]], dd[2], dd[3]);
  }
  return out;
}

Eigen::ArrayXd evalOnNodes(const DomainGrid& grid,
                           const std::function<double(Complex)>& f) {
  Eigen::ArrayXd out(grid.numNodes());
  for (int id = 0; id < grid.numNodes(); ++id) out[id] = f(grid.nodes[id].pos);
  return out;
}

Eigen::ArrayXcd evalOnNodesC(const DomainGrid& grid,
                             const std::function<Complex(Complex)>& f) {
  Eigen::ArrayXcd out(grid.numNodes());
  for (int id = 0; id < grid.numNodes(); ++id) out[id] = f(grid.nodes[id].pos);
  return out;
}

}  // namespace phsurf
