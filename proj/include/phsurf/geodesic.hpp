#ifndef PHSURF_GEODESIC_HPP
#define PHSURF_GEODESIC_HPP

#include <cstdint>
#include <vector>

#include "phsurf/metric.hpp"

namespace phsurf {

struct PathSample {
  double t;
  Complex pos;
  Complex vel;
};

/// Geodesic integrated in chart coordinates; metric speed sqrt(factor)|vel|
/// is conserved along the path up to integrator tolerance.
struct GeodesicPath {
  std::vector<PathSample> samples;
  Complex endpoint() const { return samples.back().pos; }
  Complex endVelocity() const { return samples.back().vel; }
};

struct GeodesicBall {
  Complex center;
  double radius = 0.0;
  std::vector<Complex> boundarySamples;
};

struct LogMapOptions {
  double tol = 1e-12;       // endpoint residual
  int maxIter = 80;
  int steps = 256;          // RK4 steps per shot
  double injRadius = 2.5;   // precondition on metric distance
};

/// Integrates the geodesic system gamma'' = -A(gamma) (gamma')^2 with classical
/// RK4 at fixed step. Throws ChartExitError if the path leaves the chart.
GeodesicPath geodesicShoot(const ConformalMetric& metric, Complex q0, Complex v0,
                           double tEnd, int steps);

/// Endpoint of the unit-time geodesic with initial velocity v0.
Complex expMap(const ConformalMetric& metric, Complex q0, Complex v0,
               int steps = 256);

/// Initial velocity v with expMap(q0, v) = q1, by multi-start damped Newton
/// shooting. Throws NoConvergenceError with the final residual on failure.
Complex logMap(const ConformalMetric& metric, Complex q0, Complex q1,
               const LogMapOptions& opts = {});

double geodesicDistance(const ConformalMetric& metric, Complex q0, Complex q1,
                        const LogMapOptions& opts = {});

double metricSpeed(const ConformalMetric& metric, Complex q, Complex v);

/// Ball of given geodesic radius; boundary samples found by shooting
/// metric-unit directions from the center.
GeodesicBall makeGeodesicBall(const ConformalMetric& metric, Complex center,
                              double radius, int boundarySamples = 64);

/// Sampled geodesic-triangle report: pairwise angle sums and the
/// Gauss-Bonnet identity residual |(pi - th2 - th3) - (th1 - int_T K dV)|.
struct ConvexityReport {
  int trials = 0;
  int valid = 0;
  int degenerate = 0;
  double worstPairAngleSum = 0.0;       // max over triangles, pairs of angles
  double worstGaussBonnetResidual = 0.0;
  bool allPairSumsBelowPi = true;
};

ConvexityReport ballConvexityCheck(const ConformalMetric& metric,
                                   const GeodesicBall& ball, int trials,
                                   std::uint64_t seed = 1234);

/// Shoots the geodesic tangent to the ball boundary at a boundary point both
/// ways and verifies the distance to the center exceeds the radius off the
/// tangency point.
struct TangentReport {
  int samples = 0;
  double minExcess = 0.0;      // min over s != 0 of dist(center, gamma(s)) - r
  double tangencyGap = 0.0;    // |dist at s = 0 - r|
  bool passed = false;
};

TangentReport tangentGeodesicCheck(const ConformalMetric& metric,
                                   const GeodesicBall& ball, int samples);

/// Distance between two unit-speed geodesics from a common point, sampled in t.
struct MonotonicityReport {
  bool excludedInput = false;  // dirA == dirB as metric-unit vectors
  bool strictlyIncreasing = false;
  double minIncrement = 0.0;
  int steps = 0;
};

MonotonicityReport increasingDistanceCheck(const ConformalMetric& metric,
                                           Complex p, Complex dirA, Complex dirB,
                                           double tMax, int steps);

/// The contraction: identity on the closed r-ball, radial geodesic projection
/// onto its boundary on the annulus, and dilation-after-retraction outside r0.
Complex contractionMap(const ConformalMetric& metric, const GeodesicBall& ballR,
                       const GeodesicBall& ballR0, Complex q);

struct ContractionSweep {
  int pairsOutside = 0;
  int pairsInside = 0;
  double maxQuotientOutside = 0.0;  // sampled Lipschitz quotients outside the r-ball
  double maxDeviationInside = 0.0;  // |quotient - 1| for pairs inside
};

ContractionSweep contractionQuotientSweep(const ConformalMetric& metric,
                                          const GeodesicBall& ballR,
                                          const GeodesicBall& ballR0, int pairs,
                                          std::uint64_t seed = 99,
                                          double sampleRadius = 1.0);

}  // namespace phsurf

#endif
