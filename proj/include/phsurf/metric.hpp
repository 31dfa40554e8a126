#ifndef PHSURF_METRIC_HPP
#define PHSURF_METRIC_HPP

#include <complex>
#include <string>

#include "phsurf/errors.hpp"

namespace phsurf {

using Complex = std::complex<double>;

/// The four real second partials of the log conformal factor.
struct LogHessian {
  double xx = 0.0;
  double xy = 0.0;
  double yx = 0.0;
  double yy = 0.0;
  double laplacian() const { return xx + yy; }
};

/// Conformal metric factor(q)|dq|^2 on a single chart, with analytic derivatives.
///
/// Presets: "flat" (factor 1), "sphere" (4/(1+|q|^2)^2, stereographic round
/// sphere), "hyperbolic" (4/(1-|q|^2)^2 on the unit disc), "bump"
/// (exp(amp * exp(-|q-c|^2/width^2)), mixed-sign curvature).
class ConformalMetric {
public:
  enum class Preset { Flat, Sphere, Hyperbolic, Bump };

  static ConformalMetric flat();
  static ConformalMetric sphere(double chartRadius = 4.0);
  static ConformalMetric hyperbolic(double chartRadius = 0.95);
  static ConformalMetric bump(double amp, double width, Complex center,
                              double chartRadius = 4.0);
  /// Lookup by config name; throws std::invalid_argument on unknown names.
  static ConformalMetric byName(const std::string& name, double amp = 0.5,
                                double width = 0.6, Complex center = {0.0, 0.0});

  /// Conformal factor; throws EvaluationError off the chart or on non-finite values.
  double eval(Complex q) const;
  /// Wirtinger derivative d(log factor)/dq.
  Complex logDeriv(Complex q) const;
  /// Second partials of log factor.
  LogHessian logHessian(Complex q) const;

  bool chartContains(Complex q) const;
  double chartRadius() const { return chartRadius_; }
  double lowerBound() const { return lower_; }
  double upperBound() const { return upper_; }
  Preset preset() const { return preset_; }
  const std::string& name() const { return name_; }
  double bumpAmp() const { return amp_; }
  double bumpWidth() const { return width_; }
  Complex bumpCenter() const { return center_; }

private:
  ConformalMetric(Preset p, std::string name, double chartRadius);

  Preset preset_;
  std::string name_;
  double chartRadius_;
  double lower_ = 1.0;
  double upper_ = 1.0;
  double amp_ = 0.0;
  double width_ = 1.0;
  Complex center_{0.0, 0.0};
};

/// Gauss curvature K = -Laplacian(log factor) / (2 factor) at q.
double gaussCurvature(const ConformalMetric& metric, Complex q);

/// Geodesic/Euler-Lagrange nonlinearity coefficient A(q) = d(log factor)/dq.
Complex christoffelA(const ConformalMetric& metric, Complex q);

}  // namespace phsurf

#endif
