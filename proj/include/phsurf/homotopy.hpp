#ifndef PHSURF_HOMOTOPY_HPP
#define PHSURF_HOMOTOPY_HPP

#include <memory>

#include "phsurf/certify.hpp"

namespace phsurf {

/// Closed target boundary curve with a dense arc-length table, the common
/// reference along which boundary loops are reconstructed. The base point
/// (arc length 0) is the curve's parameter origin.
class TargetCurve {
public:
  static std::shared_ptr<const TargetCurve> circle(double radius,
                                                   int samples = 8192);
  static std::shared_ptr<const TargetCurve> ellipse(double a, double b,
                                                    int samples = 8192);

  double length() const { return cum_.back(); }
  Complex pointAtArclength(double s) const;  // periodic
  bool sameCurve(const TargetCurve& other) const;

private:
  std::vector<Complex> pts_;
  std::vector<double> cum_;
};

/// Boundary data loop: target points and speeds |d point / d theta| over the
/// domain boundary angle, with positions reconstructed by arc-length
/// integration along the target curve from the common base point.
struct BoundaryLoop {
  std::shared_ptr<const TargetCurve> curve;
  Eigen::ArrayXd theta;   // uniform samples in [0, 2 pi)
  Eigen::ArrayXcd point;
  Eigen::ArrayXd speed;   // strictly positive
  double totalLength = 0.0;

  Complex at(double th) const;
  double speedAt(double th) const;
  BoundaryData asBoundaryData() const;
};

/// Loop from a target curve and a (positive) speed profile over theta; the
/// profile is normalized so the total traversed length equals the curve length.
BoundaryLoop makeLoop(std::shared_ptr<const TargetCurve> curve,
                      const std::function<double(double)>& speedProfile,
                      int samples = 2048);

/// Linear interpolation of the speeds; positions reconstructed along the
/// fixed target curve. Throws on curve/orientation/length mismatch.
BoundaryLoop boundaryHomotopy(const BoundaryLoop& loop0,
                              const BoundaryLoop& loop1, double t);

struct HomotopyState {
  double t = 0.0;
  double pt = 2.0;
  BoundaryLoop boundary;
  SolveResult solution;
  double minInteriorJ = 0.0;
  double minBoundaryJ = 0.0;
  double gradientHolderProxy = 0.0;
};

struct ContinuationConfig {
  int steps = 16;
  int bisectionCap = 6;
  bool exponentOnly = false;  // fixed boundary (the end loop), exponent path only
  SolveConfig solve;
  double holderBeta = 0.5;
  int holderPairs = 2000;
  std::uint64_t seed = 12345;
};

class ContinuationFailure : public std::runtime_error {
public:
  ContinuationFailure(const std::string& what, double tFail,
                      std::shared_ptr<HomotopyState> state)
      : std::runtime_error(what), t(tFail), offendingState(std::move(state)) {}
  double t;
  std::shared_ptr<HomotopyState> offendingState;
};

/// Combined boundary-speed and exponent continuation with warm starts and
/// Jacobian-positivity tracking; failing steps are bisected up to the cap.
std::vector<HomotopyState> continuationRun(
    const DomainGrid& grid, const ConformalMetric& sigma,
    const ConformalMetric& rho, double pFinal, double eps,
    const BoundaryLoop& phiStart, const BoundaryLoop& phiEnd,
    const ContinuationConfig& config = {});

/// Sampled-pair Hoelder quotient max |f(a)-f(b)| / |a-b|^beta.
double holderProxy(const DomainGrid& grid, const Eigen::ArrayXcd& values,
                   double beta, int pairs, std::uint64_t seed);
double holderProxyPair(const DomainGrid& grid, const Eigen::ArrayXcd& f1,
                       const Eigen::ArrayXcd& f2, double beta, int pairs,
                       std::uint64_t seed);

struct UniformBoundsReport {
  double supHolderU = 0.0;
  double supHolderDu = 0.0;
  double minBoundaryJ = 0.0;   // the measured c1
  double minInteriorJ = 0.0;
};

UniformBoundsReport uniformBoundsReport(const std::vector<HomotopyState>& states);

}  // namespace phsurf

#endif
