#ifndef PHSURF_CERTIFY_HPP
#define PHSURF_CERTIFY_HPP

#include <functional>
#include <optional>
#include <vector>

#include "phsurf/geodesic.hpp"
#include "phsurf/solver.hpp"

namespace phsurf {

/// Convex gauge on the target chart: signed distance to a convex boundary
/// polyline (negative inside), or distance to a point.
struct ConvexGauge {
  enum class Kind { SignedDistance, CenterDistance };
  Kind kind = Kind::SignedDistance;
  std::vector<Complex> polyline;  // dense CCW boundary of N
  Complex center{0.0, 0.0};
  const ConformalMetric* rho = nullptr;  // geodesic center distance if set

  double eval(Complex q) const;
};

ConvexGauge discGauge(double radius, int samples = 2048);
ConvexGauge ellipseGauge(double a, double b, int samples = 2048);
ConvexGauge polygonGauge(const std::vector<Complex>& vertices,
                         int samplesPerEdge = 256);
ConvexGauge centerGauge(const ConformalMetric& rho, Complex center);

/// Midpoint convexity of the gauge along sampled target geodesics.
struct GaugeConvexityReport {
  double worstExcess = 0.0;  // max of g(mid) - (g(a)+g(b))/2
  int pairs = 0;
};
GaugeConvexityReport gaugeConvexityCheck(const ConvexGauge& gauge,
                                         const ConformalMetric& rho,
                                         const std::vector<Complex>& samples,
                                         int pairs, std::uint64_t seed = 7);

/// Weak maximum principle for g composed with the map.
struct MaxPrincipleReport {
  double supInterior = 0.0;
  double supBoundary = 0.0;
  double margin = 0.0;  // supInterior - supBoundary (negative: strict interior)
};
MaxPrincipleReport maxPrincipleCheck(const MapField& field,
                                     const std::function<double(Complex)>& gauge);

/// min over tested interior nodes of L(g o u),
/// L = 2 lambda d_z d_zbar + lambda_z d_zbar + lambda_zbar d_z.
struct ConvexCompositionReport {
  double worst = 0.0;  // minimum of the discrete L(g o u)
  int tested = 0;
  int skipped = 0;  // image in the kink band of the gauge
};
ConvexCompositionReport convexCompositionCheck(
    const MapField& field, const EnergyParams& params,
    const ConformalMetric& sigma, const ConformalMetric& rho,
    const std::function<double(Complex)>& gauge, double kinkBand);

/// Boundary-ring Jacobian from the exact tangential derivative along the
/// boundary loop and the one-sided normal derivative.
struct BoundaryJacobianReport {
  Eigen::ArrayXd values;  // per boundary loop node, metric-scaled
  double min = 0.0;
};
BoundaryJacobianReport boundaryJacobianCheck(const MapField& field,
                                             const ConformalMetric& sigma,
                                             const ConformalMetric& rho);

/// Discrete supersolution test for -T^(-N): reports the worst (largest)
/// interior Laplacian and the worst value of T*Lap(T)/4 - (N+1)|T_z|^2
/// (the chart form of the second-order combination driving the proof).
/// Throws std::domain_error naming the node if J <= 0 somewhere.
struct SuperharmonicityReport {
  double worstLaplacian = 0.0;
  double worstIenq = 0.0;
  bool curvatureHypothesisMet = true;  // K <= 0 on M, K' >= 0 on the image
  double minInteriorJ = 0.0;
};
SuperharmonicityReport superharmonicityCheck(const MapField& field,
                                             const EnergyParams& params,
                                             const ConformalMetric& sigma,
                                             const ConformalMetric& rho,
                                             int exponentN);

/// inf_K T - inf_{boundary of K} T over nested sub-discs.
struct MinimumPrincipleReport {
  std::vector<double> radii;
  std::vector<double> margins;
  double worstMargin = 0.0;
  double supT = 0.0;
};
MinimumPrincipleReport minimumPrincipleCheck(const MapField& field,
                                             const EnergyParams& params,
                                             const ConformalMetric& sigma,
                                             const ConformalMetric& rho,
                                             const std::vector<double>& radii);

struct CertifyConfig {
  double superharmCtol = 0.0;  // 0: calibrate on the p = 2 oracle on this grid
  double minPrincipleFactor = 1e-3;
  std::vector<double> shrinkRadii = {0.9, 0.75, 0.6, 0.45};
  double convexCompFactor = 4.0;
  double imageTol = 1e-7;
  double kinkBandFactor = 2.0;  // band width in units of h
};

/// The certification bundle; exit gate of the `certify` command.
struct CertificateReport {
  double imageMaxSignedDistance = 0.0;
  double imageInteriorSup = 0.0;
  double boundaryJacobianMin = 0.0;
  double interiorJacobianMin = 0.0;
  int subharmonicityN = 1;
  double superharmonicityWorst = 0.0;
  double superharmonicityTol = 0.0;
  double ienqWorst = 0.0;
  double convexCompositionWorst = 0.0;
  double convexCompositionTol = 0.0;
  double gaugeConvexityWorst = 0.0;
  std::vector<double> minPrincipleRadii;
  std::vector<double> minPrincipleMargins;
  double minimumPrincipleMargin = 0.0;
  double minPrincipleTol = 0.0;
  bool curvatureHypothesisMet = true;

  bool passedImage = false;
  bool passedBoundaryJacobian = false;
  bool passedInteriorJacobian = false;
  bool passedSuperharmonicity = false;
  bool passedMinimumPrinciple = false;
  bool passedConvexComposition = false;
  bool passed = false;
};

/// Per-h coefficient for the superharmonicity tolerance, calibrated once on
/// the flat p = 2 Dirichlet problem with a fixed nonuniform-speed circle map.
double calibrateSuperharmCtol(const DomainGrid& grid);

CertificateReport certifyField(const MapField& field, const EnergyParams& params,
                               const ConformalMetric& sigma,
                               const ConformalMetric& rho,
                               const ConvexGauge& gauge,
                               const CertifyConfig& config = {});

/// eps -> 0 convergence study: solves the ladder (descending eps, must include
/// the eps = 0 reference), reports L^p distance of the differentials, the
/// sup-norm gap of the V-pair Jacobian on |z| <= 0.7 (both with and without
/// the rho/sigma factor), the interior W^{1,2} bound quantities, and the
/// energy-comparison ratio against the harmonic competitor.
struct SweepEntry {
  double eps = 0.0;
  bool converged = false;
  double energy = 0.0;
  int iterations = 0;
  double lpDist = 0.0;       // vs the eps = 0 reference
  double supJVdiff = 0.0;    // chart variant, |z| <= 0.7
  double supJVdiffMetric = 0.0;  // with rho/sigma (equals the T-field gap)
  double lem95lhs = 0.0;
  double lem95rhs = 0.0;
  double cacRatio = 0.0;
};

struct SweepReport {
  std::vector<SweepEntry> entries;  // descending eps; final entry eps = 0
  double noiseFloor = 0.0;          // h^2 * ||Du^0||_Lp, the grid floor
  bool distancesMonotone = false;   // 10% slack
  bool jvMonotone = false;
  double finalDist = 0.0;
  bool allConverged = false;
};

SweepReport epsilonSweep(const DomainGrid& grid, const ConformalMetric& sigma,
                         const ConformalMetric& rho, double p,
                         const BoundaryData& data, std::vector<double> epsList,
                         const SolveConfig& config = {}, int jobs = 1);

}  // namespace phsurf

#endif
