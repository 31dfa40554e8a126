#ifndef PHSURF_SOLVER_HPP
#define PHSURF_SOLVER_HPP

#include <functional>
#include <vector>

#include "phsurf/energy.hpp"

namespace phsurf {

using BoundaryData = std::function<Complex(double)>;

struct SolveConfig {
  int maxIters = 20000;
  double gradTol = 0.0;  // 0: use 1e-9 * (initial gradient norm + 1)
  double lineShrink = 0.5;
  double lineC1 = 1e-4;
  enum class Init { Harmonic, Given, RadialBlend } initKind = Init::Harmonic;
  // Relative gradient norm below which the damped quasi-Newton phase starts
  // (used for p <= 6; pure NCG otherwise).
  double newtonSwitch = 0.5;
  bool traceEnergy = false;
};

struct SolveResult {
  MapField field;
  int iterations = 0;
  double finalGradNorm = 0.0;
  double finalEnergy = 0.0;
  bool converged = false;
  std::vector<double> energyTrace;
};

/// Backtracking failed to find descent; carries the last iterate.
class LineSearchError : public NoConvergenceError {
public:
  LineSearchError(const std::string& what, double res, MapField iterate)
      : NoConvergenceError(what, res), lastIterate(std::move(iterate)) {}
  MapField lastIterate;
};

/// Discrete p = 2, flat-target harmonic extension of the boundary data
/// (direct sparse solve of the triangulated Dirichlet problem).
MapField harmonicInit(const DomainGrid& grid, const BoundaryData& data);

/// Radial Lipschitz extension u(r e^{i th}) = r * data(th).
MapField radialBlendInit(const DomainGrid& grid, const BoundaryData& data);

/// Minimizes the discrete eps-perturbed p-energy with the boundary trace held
/// bit-exact. Preconditioned nonlinear conjugate gradient with backtracking,
/// switching to damped lagged-coefficient quasi-Newton steps near convergence.
SolveResult solveDirichlet(const DomainGrid& grid, const ConformalMetric& sigma,
                           const ConformalMetric& rho, const EnergyParams& params,
                           const BoundaryData& data, const SolveConfig& config = {},
                           const MapField* given = nullptr);

struct UniquenessReport {
  bool smallnessViolated = false;
  double imageRadius = 0.0;      // geodesic radius of the boundary image
  double uniquenessBound = 0.0;  // pi / (2 sqrt(max sampled curvature)), inf if K <= 0
  bool allConverged = true;
  double maxPairwiseSup = 0.0;
  std::vector<double> pairwiseSup;
};

UniquenessReport uniquenessProbe(const DomainGrid& grid,
                                 const ConformalMetric& sigma,
                                 const ConformalMetric& rho,
                                 const EnergyParams& params,
                                 const BoundaryData& data,
                                 const std::vector<MapField>& inits,
                                 const SolveConfig& config = {});

struct CaccioppoliReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// Both sides of the energy comparison against a competitor with the same
/// boundary trace: int (eps^2+|Du|^2)^((p-2)/2) |Du|^2 dV for the solution
/// (lhs) and the competitor (rhs).
CaccioppoliReport caccioppoliRatio(const SolveResult& result,
                                   const EnergyParams& params,
                                   const ConformalMetric& sigma,
                                   const ConformalMetric& rho,
                                   const MapField& comparison);

struct WeightedTestReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool preconditionOk = false;
  double imageRadius = 0.0;
};

/// Weighted test-function inequality: lhs = int lambda |Du|^2 eta^2 dV,
/// rhs = 16 r^2 int lambda |grad eta|^2 dV, asserted only when the image of
/// the solution lies in the chart ball B(center, r).
WeightedTestReport weightedTestInequality(const SolveResult& result,
                                          const EnergyParams& params,
                                          const ConformalMetric& sigma,
                                          const ConformalMetric& rho,
                                          Complex center, double r,
                                          const std::function<double(Complex)>& eta);

}  // namespace phsurf

#endif
