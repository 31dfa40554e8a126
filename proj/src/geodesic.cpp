#include "phsurf/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace phsurf {

namespace {

struct State {
  Complex q;
  Complex v;
};

State rhs(const ConformalMetric& m, const State& s) {
  return {s.v, -m.logDeriv(s.q) * s.v * s.v};
}

State axpy(const State& a, double c, const State& b) {
  return {a.q + c * b.q, a.v + c * b.v};
}

}  // namespace

double metricSpeed(const ConformalMetric& metric, Complex q, Complex v) {
  return std::sqrt(metric.eval(q)) * std::abs(v);
}

GeodesicPath geodesicShoot(const ConformalMetric& metric, Complex q0, Complex v0,
                           double tEnd, int steps) {
  if (steps < 2) throw std::invalid_argument("geodesicShoot: steps must be >= 2");
  if (!std::isfinite(v0.real()) || !std::isfinite(v0.imag()))
    throw std::invalid_argument("geodesicShoot: non-finite initial velocity");
  GeodesicPath path;
  path.samples.reserve(static_cast<std::size_t>(steps) + 1);
  State s{q0, v0};
  const double h = tEnd / steps;
  path.samples.push_back({0.0, s.q, s.v});
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    try {
      const State k1 = rhs(metric, s);
      const State k2 = rhs(metric, axpy(s, 0.5 * h, k1));
      const State k3 = rhs(metric, axpy(s, 0.5 * h, k2));
      const State k4 = rhs(metric, axpy(s, h, k3));
      s.q += (h / 6.0) * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
      s.v += (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    } catch (const EvaluationError&) {
      throw ChartExitError("geodesic left the chart", t);
    }
    if (!metric.chartContains(s.q))
      throw ChartExitError("geodesic left the chart", t + h);
    path.samples.push_back({t + h, s.q, s.v});
  }
  return path;
}

Complex expMap(const ConformalMetric& metric, Complex q0, Complex v0, int steps) {
  if (std::abs(v0) == 0.0) return q0;
  return geodesicShoot(metric, q0, v0, 1.0, steps).endpoint();
}

Complex logMap(const ConformalMetric& metric, Complex q0, Complex q1,
               const LogMapOptions& opts) {
  if (std::abs(q1 - q0) == 0.0) return {0.0, 0.0};

  const auto residual = [&](Complex v) -> Complex {
    return expMap(metric, q0, v, opts.steps) - q1;
  };

  const Complex line = q1 - q0;
  const std::vector<Complex> starts = {
      line,
      line * 0.8,
      line * 1.25,
      line * std::polar(1.0, 0.15),
      line * std::polar(1.0, -0.15),
  };

  double bestRes = 1e300;
  for (const Complex& start : starts) {
    Complex v = start;
    Complex F;
    try {
      F = residual(v);
    } catch (const ChartExitError&) {
      continue;
    }
    double fn = std::abs(F);
    bool failed = false;
    for (int it = 0; it < opts.maxIter && fn > opts.tol; ++it) {
      // Finite-difference Jacobian of the R^2 -> R^2 endpoint map.
      const double step = std::max(1e-7, 1e-7 * std::abs(v));
      Complex Fx, Fy;
      try {
        Fx = (residual(v + Complex{step, 0.0}) - F) / step;
        Fy = (residual(v + Complex{0.0, step}) - F) / step;
      } catch (const ChartExitError&) {
        failed = true;
        break;
      }
      const double a = Fx.real(), b = Fy.real();
      const double c = Fx.imag(), d = Fy.imag();
      const double det = a * d - b * c;
      if (std::abs(det) < 1e-300) {
        failed = true;
        break;
      }
      const Complex dv{(-F.real() * d + F.imag() * b) / det,
                       (F.real() * c - F.imag() * a) / det};
      double damping = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 30; ++ls) {
        const Complex vTry = v + damping * dv;
        try {
          const Complex Ftry = residual(vTry);
          if (std::abs(Ftry) < fn) {
            v = vTry;
            F = Ftry;
            fn = std::abs(Ftry);
            accepted = true;
            break;
          }
        } catch (const ChartExitError&) {
          // shrink and retry
        }
        damping *= 0.5;
      }
      if (!accepted) {
        failed = true;
        break;
      }
    }
    if (!failed && fn <= opts.tol) return v;
    bestRes = std::min(bestRes, fn);
  }
  throw NoConvergenceError("logMap shooting failed to converge", bestRes);
}

double geodesicDistance(const ConformalMetric& metric, Complex q0, Complex q1,
                        const LogMapOptions& opts) {
  if (std::abs(q1 - q0) == 0.0) return 0.0;
  const Complex v = logMap(metric, q0, q1, opts);
  const double d = metricSpeed(metric, q0, v);
  if (d > opts.injRadius)
    throw NoConvergenceError("logMap target beyond the injectivity radius", d);
  return d;
}

GeodesicBall makeGeodesicBall(const ConformalMetric& metric, Complex center,
                              double radius, int boundarySamples) {
  GeodesicBall ball;
  ball.center = center;
  ball.radius = radius;
  ball.boundarySamples.reserve(boundarySamples);
  const double speedScale = radius / std::sqrt(metric.eval(center));
  for (int k = 0; k < boundarySamples; ++k) {
    const double th = 2.0 * M_PI * k / boundarySamples;
    ball.boundarySamples.push_back(
        expMap(metric, center, std::polar(speedScale, th)));
  }
  return ball;
}

namespace {

/// Integral of K dV over a geodesic triangle: fan of geodesics from v0 to the
/// opposite side, Simpson quadrature in the fan coordinates.
double curvatureIntegral(const ConformalMetric& metric, Complex v0, Complex v1,
                         Complex v2, const LogMapOptions& opts) {
  const int Ns = 24;  // side samples (even, Simpson)
  const int Nt = 24;  // samples along each fan geodesic
  // The opposite side v1 -> v2 as a geodesic.
  const Complex w12 = logMap(metric, v1, v2, opts);
  GeodesicPath side = geodesicShoot(metric, v1, w12, 1.0, Ns);
  // Positions on the fan grid; F(j, i) = exp(v0, (i/Nt) * log(v0, side_j)).
  std::vector<std::vector<Complex>> F(Ns + 1, std::vector<Complex>(Nt + 1));
  std::vector<std::vector<Complex>> Ft(Ns + 1, std::vector<Complex>(Nt + 1));
  for (int j = 0; j <= Ns; ++j) {
    const Complex w = logMap(metric, v0, side.samples[j].pos, opts);
    GeodesicPath fan = geodesicShoot(metric, v0, w, 1.0, Nt);
    for (int i = 0; i <= Nt; ++i) {
      F[j][i] = fan.samples[i].pos;
      Ft[j][i] = fan.samples[i].vel;
    }
  }
  const auto simpsonWeight = [](int k, int n) -> double {
    if (k == 0 || k == n) return 1.0;
    return (k % 2 == 1) ? 4.0 : 2.0;
  };
  const double hs = 1.0 / Ns, ht = 1.0 / Nt;
  double integral = 0.0;
  for (int j = 0; j <= Ns; ++j) {
    for (int i = 0; i <= Nt; ++i) {
      // dF/ds by central/one-sided differences across fan columns.
      Complex Fs;
      if (j == 0)
        Fs = (F[1][i] - F[0][i]) / hs;
      else if (j == Ns)
        Fs = (F[Ns][i] - F[Ns - 1][i]) / hs;
      else
        Fs = (F[j + 1][i] - F[j - 1][i]) / (2.0 * hs);
      const double jac = std::abs(Fs.real() * Ft[j][i].imag() -
                                  Fs.imag() * Ft[j][i].real());
      const double K = gaussCurvature(metric, F[j][i]);
      const double dV = metric.eval(F[j][i]) * jac;
      integral += simpsonWeight(j, Ns) * simpsonWeight(i, Nt) * K * dV;
    }
  }
  return integral * hs * ht / 9.0;
}

double angleBetween(Complex a, Complex b) {
  const double num = a.real() * b.real() + a.imag() * b.imag();
  const double den = std::abs(a) * std::abs(b);
  return std::acos(std::clamp(num / den, -1.0, 1.0));
}

}  // namespace

ConvexityReport ballConvexityCheck(const ConformalMetric& metric,
                                   const GeodesicBall& ball, int trials,
                                   std::uint64_t seed) {
  ConvexityReport rep;
  rep.trials = trials;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uang(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> urad(0.05, 0.95);
  LogMapOptions opts;
  const double speedScale = 1.0 / std::sqrt(metric.eval(ball.center));
  for (int trial = 0; trial < trials; ++trial) {
    Complex v[3];
    for (auto& p : v) {
      const double r = ball.radius * urad(rng);
      p = expMap(metric, ball.center, std::polar(r * speedScale, uang(rng)));
    }
    double theta[3];
    bool degenerate = false;
    try {
      for (int k = 0; k < 3; ++k) {
        const Complex la = logMap(metric, v[k], v[(k + 1) % 3], opts);
        const Complex lb = logMap(metric, v[k], v[(k + 2) % 3], opts);
        theta[k] = angleBetween(la, lb);
        if (theta[k] < 1e-3 || theta[k] > M_PI - 1e-3) degenerate = true;
      }
      if (std::abs(v[0] - v[1]) < 1e-6 || std::abs(v[1] - v[2]) < 1e-6 ||
          std::abs(v[0] - v[2]) < 1e-6)
        degenerate = true;
    } catch (const std::runtime_error&) {
      degenerate = true;
    }
    if (degenerate) {
      ++rep.degenerate;
      continue;
    }
    ++rep.valid;
    for (int k = 0; k < 3; ++k) {
      const double pairSum = theta[k] + theta[(k + 1) % 3];
      rep.worstPairAngleSum = std::max(rep.worstPairAngleSum, pairSum);
      if (pairSum >= M_PI) rep.allPairSumsBelowPi = false;
    }
    const double curv = curvatureIntegral(metric, v[0], v[1], v[2], opts);
    const double resid =
        std::abs((M_PI - theta[1] - theta[2]) - (theta[0] - curv));
    rep.worstGaussBonnetResidual = std::max(rep.worstGaussBonnetResidual, resid);
  }
  return rep;
}

TangentReport tangentGeodesicCheck(const ConformalMetric& metric,
                                   const GeodesicBall& ball, int samples) {
  TangentReport rep;
  rep.samples = samples;
  LogMapOptions opts;
  const Complex p0 = ball.boundarySamples.front();
  // Arrival velocity of the radial geodesic; the boundary tangent is its
  // rotation by pi/2 (conformal charts preserve angles).
  const Complex w = logMap(metric, ball.center, p0, opts);
  const Complex arrive = geodesicShoot(metric, ball.center, w, 1.0, opts.steps)
                             .endVelocity();
  Complex tangent = arrive * Complex{0.0, 1.0};
  tangent /= metricSpeed(metric, p0, tangent);  // metric-unit
  const double sMax = 0.6 * ball.radius;
  rep.minExcess = 1e300;
  for (int k = -samples; k <= samples; ++k) {
    if (k == 0) {
      rep.tangencyGap =
          std::abs(geodesicDistance(metric, ball.center, p0, opts) - ball.radius);
      continue;
    }
    const double s = sMax * k / samples;
    const Complex qs = expMap(metric, p0, s * tangent);
    const double d = geodesicDistance(metric, ball.center, qs, opts);
    rep.minExcess = std::min(rep.minExcess, d - ball.radius);
  }
  rep.passed = rep.minExcess > 0.0;
  return rep;
}

MonotonicityReport increasingDistanceCheck(const ConformalMetric& metric,
                                           Complex p, Complex dirA, Complex dirB,
                                           double tMax, int steps) {
  MonotonicityReport rep;
  rep.steps = steps;
  const double sp = std::sqrt(metric.eval(p));
  Complex a = dirA / (sp * std::abs(dirA));
  Complex b = dirB / (sp * std::abs(dirB));
  if (std::abs(a - b) < 1e-12) {
    rep.excludedInput = true;
    return rep;
  }
  LogMapOptions opts;
  double prev = 0.0;
  rep.minIncrement = 1e300;
  rep.strictlyIncreasing = true;
  for (int k = 1; k <= steps; ++k) {
    const double t = tMax * k / steps;
    const Complex qa = expMap(metric, p, t * a);
    const Complex qb = expMap(metric, p, t * b);
    const double d = geodesicDistance(metric, qa, qb, opts);
    rep.minIncrement = std::min(rep.minIncrement, d - prev);
    if (d <= prev) rep.strictlyIncreasing = false;
    prev = d;
  }
  return rep;
}

Complex contractionMap(const ConformalMetric& metric, const GeodesicBall& ballR,
                       const GeodesicBall& ballR0, Complex q) {
  if (!metric.chartContains(q))
    throw EvaluationError("contractionMap: point outside chart");
  if (ballR.radius >= ballR0.radius)
    throw std::invalid_argument("contractionMap: requires r < r0");
  LogMapOptions opts;
  const double d = geodesicDistance(metric, ballR.center, q, opts);
  if (d <= ballR.radius) return q;
  const Complex w = logMap(metric, ballR.center, q, opts);
  if (d <= ballR0.radius) {
    // Radial geodesic projection onto the r-sphere.
    return expMap(metric, ballR.center, (ballR.radius / d) * w);
  }
  // Outer Lipschitz retraction onto the closed r0-ball, then geodesic dilation
  // by r/r0 toward the center.
  const Complex retracted = expMap(metric, ballR.center, (ballR0.radius / d) * w);
  const Complex w0 = logMap(metric, ballR.center, retracted, opts);
  return expMap(metric, ballR.center, (ballR.radius / ballR0.radius) * w0);
}

ContractionSweep contractionQuotientSweep(const ConformalMetric& metric,
                                          const GeodesicBall& ballR,
                                          const GeodesicBall& ballR0, int pairs,
                                          std::uint64_t seed,
                                          double sampleRadius) {
  ContractionSweep sweep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uang(0.0, 2.0 * M_PI);
  LogMapOptions opts;
  const double r = ballR.radius;
  const double speedScale = 1.0 / std::sqrt(metric.eval(ballR.center));
  const auto samplePoint = [&](double lo, double hi) {
    std::uniform_real_distribution<double> urad(lo, hi);
    return expMap(metric, ballR.center,
                  std::polar(urad(rng) * speedScale, uang(rng)));
  };
  while (sweep.pairsOutside < pairs) {
    const Complex q1 = samplePoint(1.05 * r, sampleRadius);
    const Complex q2 = samplePoint(1.05 * r, sampleRadius);
    const double d = geodesicDistance(metric, q1, q2, opts);
    if (d < 1e-4) continue;
    const Complex p1 = contractionMap(metric, ballR, ballR0, q1);
    const Complex p2 = contractionMap(metric, ballR, ballR0, q2);
    const double dp = geodesicDistance(metric, p1, p2, opts);
    sweep.maxQuotientOutside = std::max(sweep.maxQuotientOutside, dp / d);
    ++sweep.pairsOutside;
  }
  const int insidePairs = std::max(8, pairs / 8);
  while (sweep.pairsInside < insidePairs) {
    const Complex q1 = samplePoint(0.0, 0.95 * r);
    const Complex q2 = samplePoint(0.0, 0.95 * r);
    const double d = geodesicDistance(metric, q1, q2, opts);
    if (d < 1e-4) continue;
    const Complex p1 = contractionMap(metric, ballR, ballR0, q1);
    const Complex p2 = contractionMap(metric, ballR, ballR0, q2);
    const double dp = geodesicDistance(metric, p1, p2, opts);
    sweep.maxDeviationInside =
        std::max(sweep.maxDeviationInside, std::abs(dp / d - 1.0));
    ++sweep.pairsInside;
  }
  return sweep;
}

}  // namespace phsurf
