#include "phsurf/homotopy.hpp"

#include <cmath>
#include <random>

namespace phsurf {

std::shared_ptr<const TargetCurve> TargetCurve::circle(double radius,
                                                       int samples) {
  auto c = std::make_shared<TargetCurve>();
  c->pts_.resize(samples + 1);
  c->cum_.resize(samples + 1);
  double s = 0.0;
  for (int k = 0; k <= samples; ++k)
    c->pts_[k] = std::polar(radius, 2.0 * M_PI * k / samples);
  c->cum_[0] = 0.0;
  for (int k = 1; k <= samples; ++k) {
    s += std::abs(c->pts_[k] - c->pts_[k - 1]);
    c->cum_[k] = s;
  }
  return c;
}

std::shared_ptr<const TargetCurve> TargetCurve::ellipse(double a, double b,
                                                        int samples) {
  auto c = std::make_shared<TargetCurve>();
  c->pts_.resize(samples + 1);
  c->cum_.resize(samples + 1);
  for (int k = 0; k <= samples; ++k) {
    const double th = 2.0 * M_PI * k / samples;
    c->pts_[k] = {a * std::cos(th), b * std::sin(th)};
  }
  c->cum_[0] = 0.0;
  for (int k = 1; k <= samples; ++k)
    c->cum_[k] = c->cum_[k - 1] + std::abs(c->pts_[k] - c->pts_[k - 1]);
  return c;
}

Complex TargetCurve::pointAtArclength(double s) const {
  const double L = length();
  s = std::fmod(s, L);
  if (s < 0.0) s += L;
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
  const std::size_t hi = std::min<std::size_t>(it - cum_.begin(), cum_.size() - 1);
  const std::size_t lo = hi - 1;
  const double seg = cum_[hi] - cum_[lo];
  const double w = seg > 0.0 ? (s - cum_[lo]) / seg : 0.0;
  return pts_[lo] + w * (pts_[hi] - pts_[lo]);
}

bool TargetCurve::sameCurve(const TargetCurve& other) const {
  if (std::abs(length() - other.length()) > 1e-9 * (1.0 + length()))
    return false;
  const std::size_t stride = std::max<std::size_t>(1, pts_.size() / 16);
  for (std::size_t k = 0; k < pts_.size(); k += stride) {
    if (std::abs(pts_[k] - other.pointAtArclength(cum_[k])) > 1e-6) return false;
  }
  return true;
}

Complex BoundaryLoop::at(double th) const {
  const int n = static_cast<int>(theta.size());
  const double step = 2.0 * M_PI / n;
  double x = std::fmod(th, 2.0 * M_PI);
  if (x < 0.0) x += 2.0 * M_PI;
  const int k = std::min(static_cast<int>(x / step), n - 1);
  const double w = (x - k * step) / step;
  const Complex a = point[k];
  const Complex b = point[(k + 1) % n];
  return a + w * (b - a);
}

double BoundaryLoop::speedAt(double th) const {
  const int n = static_cast<int>(theta.size());
  const double step = 2.0 * M_PI / n;
  double x = std::fmod(th, 2.0 * M_PI);
  if (x < 0.0) x += 2.0 * M_PI;
  const int k = std::min(static_cast<int>(x / step), n - 1);
  const double w = (x - k * step) / step;
  return speed[k] + w * (speed[(k + 1) % n] - speed[k]);
}

BoundaryData BoundaryLoop::asBoundaryData() const {
  const BoundaryLoop copy = *this;
  return [copy](double th) { return copy.at(th); };
}

namespace {

/// Positions from speeds by trapezoid arc-length integration from the base
/// point. The same quadrature is used everywhere so endpoint loops are
/// reproduced exactly by the homotopy.
void reconstructPositions(BoundaryLoop& loop) {
  const int n = static_cast<int>(loop.theta.size());
  const double step = 2.0 * M_PI / n;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    if (k > 0) s += 0.5 * (loop.speed[k - 1] + loop.speed[k]) * step;
    loop.point[k] = loop.curve->pointAtArclength(s);
  }
}

double loopQuadLength(const Eigen::ArrayXd& speed) {
  const int n = static_cast<int>(speed.size());
  const double step = 2.0 * M_PI / n;
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += 0.5 * (speed[k] + speed[(k + 1) % n]) * step;
  return s;
}

}  // namespace

BoundaryLoop makeLoop(std::shared_ptr<const TargetCurve> curve,
                      const std::function<double(double)>& speedProfile,
                      int samples) {
  BoundaryLoop loop;
  loop.curve = std::move(curve);
  loop.theta.resize(samples);
  loop.point.resize(samples);
  loop.speed.resize(samples);
  for (int k = 0; k < samples; ++k) {
    loop.theta[k] = 2.0 * M_PI * k / samples;
    const double s = speedProfile(loop.theta[k]);
    if (!(s > 0.0))
      throw std::invalid_argument("makeLoop: boundary speed must be positive");
    loop.speed[k] = s;
  }
  // Normalize the traversed length to the curve length under the loop's own
  // trapezoid quadrature.
  const double L = loop.curve->length();
  loop.speed *= L / loopQuadLength(loop.speed);
  loop.totalLength = L;
  reconstructPositions(loop);
  return loop;
}

BoundaryLoop boundaryHomotopy(const BoundaryLoop& loop0,
                              const BoundaryLoop& loop1, double t) {
  if (loop0.theta.size() != loop1.theta.size())
    throw std::invalid_argument("boundaryHomotopy: sample counts differ");
  if (!loop0.curve || !loop1.curve || !loop0.curve->sameCurve(*loop1.curve))
    throw std::invalid_argument("boundaryHomotopy: target curves differ");
  if (std::abs(loop0.totalLength - loop1.totalLength) >
      1e-9 * (1.0 + loop0.totalLength))
    throw std::invalid_argument("boundaryHomotopy: lengths differ");
  if ((loop0.speed <= 0.0).any() || (loop1.speed <= 0.0).any())
    throw std::invalid_argument("boundaryHomotopy: orientation mismatch");
  BoundaryLoop loop;
  loop.curve = loop0.curve;
  loop.theta = loop0.theta;
  loop.speed = (1.0 - t) * loop0.speed + t * loop1.speed;
  loop.totalLength = loop0.totalLength;
  loop.point.resize(loop.theta.size());
  reconstructPositions(loop);
  return loop;
}

double holderProxy(const DomainGrid& grid, const Eigen::ArrayXcd& values,
                   double beta, int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, grid.numNodes() - 1);
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const int a = pick(rng), b = pick(rng);
    const double d = std::abs(grid.nodes[a].pos - grid.nodes[b].pos);
    if (d < 1e-12) continue;
    worst = std::max(worst,
                     std::abs(values[a] - values[b]) / std::pow(d, beta));
  }
  return worst;
}

double holderProxyPair(const DomainGrid& grid, const Eigen::ArrayXcd& f1,
                       const Eigen::ArrayXcd& f2, double beta, int pairs,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, grid.numNodes() - 1);
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const int a = pick(rng), b = pick(rng);
    const double d = std::abs(grid.nodes[a].pos - grid.nodes[b].pos);
    if (d < 1e-12) continue;
    const double df = std::sqrt(std::norm(f1[a] - f1[b]) +
                                std::norm(f2[a] - f2[b]));
    worst = std::max(worst, df / std::pow(d, beta));
  }
  return worst;
}

namespace {

HomotopyState solveState(const DomainGrid& grid, const ConformalMetric& sigma,
                         const ConformalMetric& rho, double pFinal, double eps,
                         const BoundaryLoop& phiStart, const BoundaryLoop& phiEnd,
                         double t, const ContinuationConfig& config,
                         const MapField* warm) {
  HomotopyState st;
  st.t = t;
  st.pt = 2.0 * (1.0 - t) + pFinal * t;
  st.boundary = config.exponentOnly ? phiEnd
                                    : boundaryHomotopy(phiStart, phiEnd, t);
  SolveConfig sc = config.solve;
  const MapField* given = nullptr;
  if (warm) {
    sc.initKind = SolveConfig::Init::Given;
    given = warm;
  }
  const EnergyParams params{st.pt, eps};
  st.solution = solveDirichlet(grid, sigma, rho, params,
                               st.boundary.asBoundaryData(), sc, given);
  const Eigen::ArrayXd J = jacobianField(st.solution.field, sigma, rho);
  st.minInteriorJ = 1e300;
  for (int id = 0; id < grid.interiorCount; ++id)
    st.minInteriorJ = std::min(st.minInteriorJ, J[id]);
  st.minBoundaryJ = boundaryJacobianCheck(st.solution.field, sigma, rho).min;
  const WirtingerFields w = wirtinger(st.solution.field);
  st.gradientHolderProxy = holderProxyPair(grid, w.uz, w.uzbar,
                                           config.holderBeta,
                                           config.holderPairs, config.seed);
  return st;
}

}  // namespace

std::vector<HomotopyState> continuationRun(
    const DomainGrid& grid, const ConformalMetric& sigma,
    const ConformalMetric& rho, double pFinal, double eps,
    const BoundaryLoop& phiStart, const BoundaryLoop& phiEnd,
    const ContinuationConfig& config) {
  if (!(eps > 0.0))
    throw std::invalid_argument(
        "continuationRun: requires eps > 0 (uniformly elliptic regime)");
  if (!(pFinal >= 2.0))
    throw std::invalid_argument("continuationRun: pFinal must be >= 2");

  std::vector<HomotopyState> states;
  const auto accept = [&](HomotopyState&& st) {
    states.push_back(std::move(st));
  };

  HomotopyState first = solveState(grid, sigma, rho, pFinal, eps, phiStart,
                                   phiEnd, 0.0, config, nullptr);
  if (!first.solution.converged || first.minInteriorJ <= 0.0)
    throw ContinuationFailure("continuation failed at t = 0", 0.0,
                              std::make_shared<HomotopyState>(std::move(first)));
  accept(std::move(first));

  double tDone = 0.0;
  for (int k = 1; k <= config.steps; ++k) {
    double tTarget = double(k) / config.steps;
    int bisections = 0;
    while (tDone < tTarget - 1e-15) {
      double tTry = tTarget;
      for (;;) {
        HomotopyState st =
            solveState(grid, sigma, rho, pFinal, eps, phiStart, phiEnd, tTry,
                       config, &states.back().solution.field);
        if (st.solution.converged && st.minInteriorJ > 0.0) {
          tDone = tTry;
          accept(std::move(st));
          break;
        }
        if (++bisections > config.bisectionCap)
          throw ContinuationFailure(
              "continuation bisection cap exceeded (discretization breakdown "
              "detected)",
              tTry, std::make_shared<HomotopyState>(std::move(st)));
        tTry = 0.5 * (tDone + tTry);
      }
    }
  }
  return states;
}

UniformBoundsReport uniformBoundsReport(const std::vector<HomotopyState>& states) {
  if (states.empty())
    throw std::invalid_argument("uniformBoundsReport: empty state list");
  UniformBoundsReport rep;
  rep.minBoundaryJ = 1e300;
  rep.minInteriorJ = 1e300;
  for (const auto& st : states) {
    const DomainGrid& g = *st.solution.field.grid;
    rep.supHolderU = std::max(
        rep.supHolderU, holderProxy(g, st.solution.field.values, 0.5, 2000, 7));
    rep.supHolderDu = std::max(rep.supHolderDu, st.gradientHolderProxy);
    rep.minBoundaryJ = std::min(rep.minBoundaryJ, st.minBoundaryJ);
    rep.minInteriorJ = std::min(rep.minInteriorJ, st.minInteriorJ);
  }
  return rep;
}

}  // namespace phsurf
