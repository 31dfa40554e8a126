#include "phsurf/solver.hpp"

#include <Eigen/Sparse>
#include <cmath>

#include "phsurf/geodesic.hpp"

namespace phsurf {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

/// Stiffness-type matrix sum_T w_T * (local P1 stiffness) on interior nodes,
/// plus the coupling columns to boundary values folded into a rhs operator.
SpMat assembleWeighted(const DomainGrid& g, const std::vector<double>& triW) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(g.tris.size() * 9);
  for (std::size_t t = 0; t < g.tris.size(); ++t) {
    const auto& tri = g.tris[t];
    for (int a = 0; a < 3; ++a) {
      if (!g.isInterior(tri.v[a])) continue;
      for (int b = 0; b < 3; ++b) {
        if (!g.isInterior(tri.v[b])) continue;
        const double kab =
            4.0 * tri.area *
            (tri.alpha[a].real() * tri.alpha[b].real() +
             tri.alpha[a].imag() * tri.alpha[b].imag());
        trips.emplace_back(tri.v[a], tri.v[b], triW[t] * kab);
      }
    }
  }
  SpMat K(g.interiorCount, g.interiorCount);
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

/// rhs_k = -sum_T w_T sum_{b boundary} K_loc(k,b) u_b for interior k.
Eigen::VectorXcd boundaryRhs(const DomainGrid& g, const std::vector<double>& triW,
                             const Eigen::ArrayXcd& u) {
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(g.interiorCount);
  for (std::size_t t = 0; t < g.tris.size(); ++t) {
    const auto& tri = g.tris[t];
    for (int a = 0; a < 3; ++a) {
      if (!g.isInterior(tri.v[a])) continue;
      for (int b = 0; b < 3; ++b) {
        if (g.isInterior(tri.v[b])) continue;
        const double kab =
            4.0 * tri.area *
            (tri.alpha[a].real() * tri.alpha[b].real() +
             tri.alpha[a].imag() * tri.alpha[b].imag());
        rhs[tri.v[a]] -= triW[t] * kab * u[tri.v[b]];
      }
    }
  }
  return rhs;
}

double dotRe(const Eigen::ArrayXcd& a, const Eigen::ArrayXcd& b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s;
}

double normOf(const Eigen::ArrayXcd& a, int n) {
  return std::sqrt(dotRe(a, a, n));
}

Eigen::ArrayXcd ldltSolve(const Eigen::SimplicialLDLT<SpMat>& ldlt,
                          const Eigen::ArrayXcd& g, int n) {
  Eigen::VectorXd re(n), im(n);
  for (int i = 0; i < n; ++i) {
    re[i] = g[i].real();
    im[i] = g[i].imag();
  }
  const Eigen::VectorXd sre = ldlt.solve(re);
  const Eigen::VectorXd sim = ldlt.solve(im);
  Eigen::ArrayXcd out = Eigen::ArrayXcd::Zero(g.size());
  for (int i = 0; i < n; ++i) out[i] = Complex(sre[i], sim[i]);
  return out;
}

std::vector<double> kacanovWeights(const DomainGrid& g, const Eigen::ArrayXcd& u,
                                   const EnergyParams& params,
                                   const ConformalMetric& sigma,
                                   const ConformalMetric& rho) {
  const double e2 = params.eps * params.eps;
  std::vector<double> w(g.tris.size());
  double meanQ = 0.0;
  for (std::size_t t = 0; t < g.tris.size(); ++t) {
    const auto& tri = g.tris[t];
    Complex a{0, 0}, b{0, 0}, m{0, 0};
    for (int k = 0; k < 3; ++k) {
      a += tri.alpha[k] * u[tri.v[k]];
      b += tri.beta[k] * u[tri.v[k]];
      m += u[tri.v[k]] / 3.0;
    }
    const double S = std::norm(a) + std::norm(b);
    const double R = rho.eval(m);
    const double Q = e2 + R / sigma.eval(tri.centroid) * S;
    w[t] = Q;  // store Q, weight below once the floor scale is known
    meanQ += Q;
  }
  meanQ /= std::max<std::size_t>(1, g.tris.size());
  const double floorQ = std::max(1e-30, 1e-10 * meanQ);
  for (std::size_t t = 0; t < g.tris.size(); ++t) {
    const auto& tri = g.tris[t];
    Complex m{0, 0};
    for (int k = 0; k < 3; ++k) m += u[tri.v[k]] / 3.0;
    w[t] = 0.5 * params.p * std::pow(w[t] + floorQ, 0.5 * params.p - 1.0) *
           rho.eval(m);
  }
  return w;
}

}  // namespace

MapField harmonicInit(const DomainGrid& grid, const BoundaryData& data) {
  MapField f = makeField(grid);
  setBoundaryValues(f, data);
  const std::vector<double> ones(grid.tris.size(), 1.0);
  const SpMat K = assembleWeighted(grid, ones);
  Eigen::SimplicialLDLT<SpMat> ldlt(K);
  if (ldlt.info() != Eigen::Success)
    throw NoConvergenceError("harmonicInit: factorization failed", 0.0);
  const Eigen::VectorXcd rhs = boundaryRhs(grid, ones, f.values);
  Eigen::VectorXd re(grid.interiorCount), im(grid.interiorCount);
  for (int i = 0; i < grid.interiorCount; ++i) {
    re[i] = rhs[i].real();
    im[i] = rhs[i].imag();
  }
  const Eigen::VectorXd xre = ldlt.solve(re);
  const Eigen::VectorXd xim = ldlt.solve(im);
  for (int i = 0; i < grid.interiorCount; ++i)
    f.values[i] = Complex(xre[i], xim[i]);
  return f;
}

MapField radialBlendInit(const DomainGrid& grid, const BoundaryData& data) {
  MapField f = makeField(grid);
  setBoundaryValues(f, data);
  for (int i = 0; i < grid.interiorCount; ++i) {
    const Complex z = grid.nodes[i].pos;
    const double r = std::abs(z);
    f.values[i] = (r == 0.0) ? Complex{0, 0}
                             : r * data(std::atan2(z.imag(), z.real()));
  }
  return f;
}

SolveResult solveDirichlet(const DomainGrid& grid, const ConformalMetric& sigma,
                           const ConformalMetric& rho, const EnergyParams& params,
                           const BoundaryData& data, const SolveConfig& config,
                           const MapField* given) {
  params.validate();
  for (int id : grid.boundaryLoop) {
    const Complex v = data(grid.nodes[id].theta);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("solveDirichlet: non-finite boundary data");
  }

  SolveResult res;
  switch (config.initKind) {
    case SolveConfig::Init::Harmonic:
      res.field = harmonicInit(grid, data);
      break;
    case SolveConfig::Init::RadialBlend:
      res.field = radialBlendInit(grid, data);
      break;
    case SolveConfig::Init::Given:
      if (!given)
        throw std::invalid_argument("solveDirichlet: init field missing");
      res.field = *given;
      res.field.grid = &grid;
      setBoundaryValues(res.field, data);  // trace is bit-exact by construction
      break;
  }

  const int nI = grid.interiorCount;
  auto& u = res.field.values;

  Eigen::SimplicialLDLT<SpMat> prec;
  {
    const std::vector<double> ones(grid.tris.size(), 1.0);
    prec.compute(assembleWeighted(grid, ones));
    if (prec.info() != Eigen::Success)
      throw NoConvergenceError("solveDirichlet: preconditioner failed", 0.0);
  }

  double energy = energyValue(res.field, params, sigma, rho);
  Eigen::ArrayXcd g = energyGradient(res.field, params, sigma, rho);
  double gnorm = normOf(g, nI);
  const double g0 = gnorm;
  const double tol = config.gradTol > 0.0 ? config.gradTol : 1e-9 * (g0 + 1.0);
  if (config.traceEnergy) res.energyTrace.push_back(energy);

  Eigen::ArrayXcd z = ldltSolve(prec, g, nI);
  Eigen::ArrayXcd dir = -z;
  double gz = dotRe(g, z, nI);
  const bool newtonEligible = params.p <= 6.0;

  const auto lineSearch = [&](const Eigen::ArrayXcd& d, double slope) -> bool {
    double t = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      MapField trial = res.field;
      for (int i = 0; i < nI; ++i) trial.values[i] = u[i] + t * d[i];
      const double etrial = energyValue(trial, params, sigma, rho);
      if (etrial <= energy + config.lineC1 * t * slope) {
        u = trial.values;
        energy = etrial;
        return true;
      }
      t *= config.lineShrink;
    }
    return false;
  };

  int iter = 0;
  for (; iter < config.maxIters && gnorm > tol; ++iter) {
    const bool newtonPhase = newtonEligible && gnorm <= config.newtonSwitch * (g0 + tol);
    bool stepped = false;
    if (newtonPhase) {
      const auto w = kacanovWeights(grid, u, params, sigma, rho);
      Eigen::SimplicialLDLT<SpMat> ldlt(assembleWeighted(grid, w));
      if (ldlt.info() == Eigen::Success) {
        const Eigen::ArrayXcd dn = -ldltSolve(ldlt, g, nI);
        const double slope = dotRe(g, dn, nI);
        if (slope < 0.0) stepped = lineSearch(dn, slope);
      }
    }
    if (!stepped) {
      double slope = dotRe(g, dir, nI);
      if (slope >= 0.0) {  // restart on loss of descent
        dir = -z;
        slope = -gz;
      }
      if (!lineSearch(dir, slope))
        throw LineSearchError("solveDirichlet: line search failed", gnorm,
                              res.field);
    }
    if (config.traceEnergy) res.energyTrace.push_back(energy);

    const Eigen::ArrayXcd gNew = energyGradient(res.field, params, sigma, rho);
    const Eigen::ArrayXcd zNew = ldltSolve(prec, gNew, nI);
    const double gzNew = dotRe(gNew, zNew, nI);
    const double beta =
        std::max(0.0, (gzNew - dotRe(g, zNew, nI)) / std::max(gz, 1e-300));
    dir = -zNew + beta * dir;
    g = gNew;
    z = zNew;
    gz = gzNew;
    gnorm = normOf(g, nI);
  }

  res.iterations = iter;
  res.finalGradNorm = gnorm;
  res.finalEnergy = energy;
  res.converged = gnorm <= tol;
  return res;
}

UniquenessReport uniquenessProbe(const DomainGrid& grid,
                                 const ConformalMetric& sigma,
                                 const ConformalMetric& rho,
                                 const EnergyParams& params,
                                 const BoundaryData& data,
                                 const std::vector<MapField>& inits,
                                 const SolveConfig& config) {
  UniquenessReport rep;

  // Smallness gate: boundary image inside a geodesic ball of the Fuchs
  // radius pi / (2 sqrt(kappa)), kappa the largest sampled target curvature.
  std::vector<Complex> samples;
  Complex centroid{0, 0};
  for (int k = 0; k < 64; ++k) {
    const Complex q = data(2.0 * M_PI * k / 64.0);
    samples.push_back(q);
    centroid += q / 64.0;
  }
  double kappa = -1e300;
  for (const Complex& q : samples)
    kappa = std::max(kappa, gaussCurvature(rho, q));
  rep.uniquenessBound =
      kappa > 0.0 ? M_PI / (2.0 * std::sqrt(kappa)) : 1e300;
  for (const Complex& q : samples) {
    try {
      rep.imageRadius =
          std::max(rep.imageRadius, geodesicDistance(rho, centroid, q));
    } catch (const std::runtime_error&) {
      rep.smallnessViolated = true;
    }
  }
  if (rep.imageRadius >= rep.uniquenessBound) rep.smallnessViolated = true;

  std::vector<SolveResult> sols;
  for (const MapField& init : inits) {
    SolveConfig c = config;
    c.initKind = SolveConfig::Init::Given;
    SolveResult r = solveDirichlet(grid, sigma, rho, params, data, c, &init);
    rep.allConverged = rep.allConverged && r.converged;
    sols.push_back(std::move(r));
  }
  for (std::size_t a = 0; a < sols.size(); ++a)
    for (std::size_t b = a + 1; b < sols.size(); ++b) {
      const double sup =
          (sols[a].field.values - sols[b].field.values).abs().maxCoeff();
      rep.pairwiseSup.push_back(sup);
      rep.maxPairwiseSup = std::max(rep.maxPairwiseSup, sup);
    }
  return rep;
}

CaccioppoliReport caccioppoliRatio(const SolveResult& result,
                                   const EnergyParams& params,
                                   const ConformalMetric& sigma,
                                   const ConformalMetric& rho,
                                   const MapField& comparison) {
  const DomainGrid& g = *result.field.grid;
  for (int id : g.boundaryLoop) {
    if (std::abs(result.field.values[id] - comparison.values[id]) > 1e-12)
      throw std::invalid_argument("caccioppoliRatio: boundary traces differ");
  }
  const auto integrand = [&](const MapField& f) {
    const Eigen::ArrayXd dns = duNormSq(f, sigma, rho);
    const double e2 = params.eps * params.eps;
    const Eigen::ArrayXd lam = (e2 + dns).pow(0.5 * (params.p - 2.0));
    return integrate(g, (lam * dns).eval(), sigma);
  };
  CaccioppoliReport rep;
  rep.lhs = integrand(result.field);
  rep.rhs = integrand(comparison);
  rep.ratio = rep.lhs / rep.rhs;
  return rep;
}

WeightedTestReport weightedTestInequality(
    const SolveResult& result, const EnergyParams& params,
    const ConformalMetric& sigma, const ConformalMetric& rho, Complex center,
    double r, const std::function<double(Complex)>& eta) {
  const DomainGrid& g = *result.field.grid;
  WeightedTestReport rep;
  for (int id = 0; id < g.numNodes(); ++id)
    rep.imageRadius =
        std::max(rep.imageRadius, std::abs(result.field.values[id] - center));
  rep.preconditionOk = rep.imageRadius <= r;

  const Eigen::ArrayXd dns = duNormSq(result.field, sigma, rho);
  const double e2 = params.eps * params.eps;
  const Eigen::ArrayXd lam = (e2 + dns).pow(0.5 * (params.p - 2.0));
  Eigen::ArrayXd etaSq(g.numNodes()), gradEtaSq(g.numNodes());
  const double fd = 1e-6;
  for (int id = 0; id < g.numNodes(); ++id) {
    const Complex z = g.nodes[id].pos;
    const double e = eta(z);
    etaSq[id] = e * e;
    const double ex = (eta(z + Complex{fd, 0}) - eta(z - Complex{fd, 0})) / (2 * fd);
    const double ey = (eta(z + Complex{0, fd}) - eta(z - Complex{0, fd})) / (2 * fd);
    gradEtaSq[id] = ex * ex + ey * ey;
  }
  rep.lhs = integrate(g, (lam * dns * etaSq).eval(), sigma);
  // int lambda |grad eta|^2_sigma dV_M: the sigma factors cancel to a flat
  // integral of lambda |grad eta|^2 dx dy.
  double rhsInt = 0.0;
  for (int id = 0; id < g.interiorCount; ++id)
    rhsInt += g.quadWeight[id] * lam[id] * gradEtaSq[id];
  rep.rhs = 16.0 * r * r * rhsInt;
  return rep;
}

}  // namespace phsurf
