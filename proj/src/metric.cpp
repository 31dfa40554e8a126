#include "phsurf/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace phsurf {

ConformalMetric::ConformalMetric(Preset p, std::string name, double chartRadius)
    : preset_(p), name_(std::move(name)), chartRadius_(chartRadius) {}

ConformalMetric ConformalMetric::flat() {
  ConformalMetric m(Preset::Flat, "flat", 1e30);
  m.lower_ = 1.0;
  m.upper_ = 1.0;
  return m;
}

ConformalMetric ConformalMetric::sphere(double chartRadius) {
  ConformalMetric m(Preset::Sphere, "sphere", chartRadius);
  const double s = 1.0 + chartRadius * chartRadius;
  m.lower_ = 4.0 / (s * s);
  m.upper_ = 4.0;
  return m;
}

ConformalMetric ConformalMetric::hyperbolic(double chartRadius) {
  if (chartRadius <= 0.0 || chartRadius >= 1.0)
    throw std::invalid_argument("hyperbolic chart radius must lie in (0,1)");
  ConformalMetric m(Preset::Hyperbolic, "hyperbolic", chartRadius);
  const double s = 1.0 - chartRadius * chartRadius;
  m.lower_ = 4.0;
  m.upper_ = 4.0 / (s * s);
  return m;
}

ConformalMetric ConformalMetric::bump(double amp, double width, Complex center,
                                      double chartRadius) {
  if (width <= 0.0) throw std::invalid_argument("bump width must be positive");
  ConformalMetric m(Preset::Bump, "bump", chartRadius);
  m.amp_ = amp;
  m.width_ = width;
  m.center_ = center;
  m.lower_ = std::exp(std::min(0.0, amp));
  m.upper_ = std::exp(std::max(0.0, amp));
  return m;
}

ConformalMetric ConformalMetric::byName(const std::string& name, double amp,
                                        double width, Complex center) {
  if (name == "flat") return flat();
  if (name == "sphere") return sphere();
  if (name == "hyperbolic") return hyperbolic();
  if (name == "bump") return bump(amp, width, center);
  throw std::invalid_argument("unknown metric preset: " + name);
}

bool ConformalMetric::chartContains(Complex q) const {
  if (!std::isfinite(q.real()) || !std::isfinite(q.imag())) return false;
  return std::abs(q) <= chartRadius_;
}

double ConformalMetric::eval(Complex q) const {
  if (!chartContains(q))
    throw EvaluationError(name_ + ": point outside chart");
  switch (preset_) {
    case Preset::Flat:
      return 1.0;
    case Preset::Sphere: {
      const double s = 1.0 + std::norm(q);
      return 4.0 / (s * s);
    }
    case Preset::Hyperbolic: {
      const double s = 1.0 - std::norm(q);
      return 4.0 / (s * s);
    }
    case Preset::Bump: {
      const Complex d = q - center_;
      return std::exp(amp_ * std::exp(-std::norm(d) / (width_ * width_)));
    }
  }
  throw EvaluationError("unreachable metric preset");
}

Complex ConformalMetric::logDeriv(Complex q) const {
  if (!chartContains(q))
    throw EvaluationError(name_ + ": point outside chart");
  switch (preset_) {
    case Preset::Flat:
      return {0.0, 0.0};
    case Preset::Sphere:
      return -2.0 * std::conj(q) / (1.0 + std::norm(q));
    case Preset::Hyperbolic:
      return 2.0 * std::conj(q) / (1.0 - std::norm(q));
    case Preset::Bump: {
      // log factor = amp * exp(-|q-c|^2/w^2); d/dq |q-c|^2 = conj(q-c).
      const Complex d = q - center_;
      const double w2 = width_ * width_;
      return amp_ * std::exp(-std::norm(d) / w2) * (-std::conj(d) / w2);
    }
  }
  throw EvaluationError("unreachable metric preset");
}

LogHessian ConformalMetric::logHessian(Complex q) const {
  if (!chartContains(q))
    throw EvaluationError(name_ + ": point outside chart");
  const double x = q.real(), y = q.imag();
  LogHessian H;
  switch (preset_) {
    case Preset::Flat:
      return H;
    case Preset::Sphere: {
      const double s = 1.0 + x * x + y * y;
      H.xx = -4.0 / s + 8.0 * x * x / (s * s);
      H.yy = -4.0 / s + 8.0 * y * y / (s * s);
      H.xy = H.yx = 8.0 * x * y / (s * s);
      return H;
    }
    case Preset::Hyperbolic: {
      const double s = 1.0 - x * x - y * y;
      H.xx = 4.0 / s + 8.0 * x * x / (s * s);
      H.yy = 4.0 / s + 8.0 * y * y / (s * s);
      H.xy = H.yx = 8.0 * x * y / (s * s);
      return H;
    }
    case Preset::Bump: {
      const double dx = x - center_.real(), dy = y - center_.imag();
      const double w2 = width_ * width_;
      const double e = std::exp(-(dx * dx + dy * dy) / w2);
      // phi = amp*e; phi_x = amp*e*(-2dx/w2)
      H.xx = amp_ * e * (4.0 * dx * dx / (w2 * w2) - 2.0 / w2);
      H.yy = amp_ * e * (4.0 * dy * dy / (w2 * w2) - 2.0 / w2);
      H.xy = H.yx = amp_ * e * (4.0 * dx * dy / (w2 * w2));
      return H;
    }
  }
  throw EvaluationError("unreachable metric preset");
}

double gaussCurvature(const ConformalMetric& metric, Complex q) {
  const double f = metric.eval(q);
  if (!std::isfinite(f) || f <= 0.0)
    throw EvaluationError("non-finite metric factor in curvature");
  return -metric.logHessian(q).laplacian() / (2.0 * f);
}

Complex christoffelA(const ConformalMetric& metric, Complex q) {
  return metric.logDeriv(q);
}

}  // namespace phsurf
