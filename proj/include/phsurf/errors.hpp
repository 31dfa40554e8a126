#ifndef PHSURF_ERRORS_HPP
#define PHSURF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace phsurf {

/// Metric or field evaluation hit a non-finite value or a point off the chart.
class EvaluationError : public std::runtime_error {
public:
  explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

/// A geodesic left the coordinate chart; carries the exit time.
class ChartExitError : public std::runtime_error {
public:
  ChartExitError(const std::string& what, double t)
      : std::runtime_error(what), exitTime(t) {}
  double exitTime;
};

/// An iterative solve stopped without meeting its tolerance; carries the residual.
class NoConvergenceError : public std::runtime_error {
public:
  NoConvergenceError(const std::string& what, double res)
      : std::runtime_error(what), residual(res) {}
  double residual;
};

}  // namespace phsurf

#endif
