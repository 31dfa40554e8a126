#include "phsurf/certify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

namespace phsurf {

namespace {

double pointSegmentDist(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

bool insideConvexPolyline(Complex p, const std::vector<Complex>& poly) {
  // CCW convex polyline: inside iff p is to the left of every edge.
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Complex a = poly[k];
    const Complex b = poly[(k + 1) % poly.size()];
    const Complex e = b - a, d = p - a;
    if (e.real() * d.imag() - e.imag() * d.real() < 0.0) return false;
  }
  return true;
}

}  // namespace

double ConvexGauge::eval(Complex q) const {
  if (kind == Kind::CenterDistance) {
    if (rho && rho->preset() != ConformalMetric::Preset::Flat)
      return geodesicDistance(*rho, center, q);
    return std::abs(q - center);
  }
  double d = 1e300;
  for (std::size_t k = 0; k < polyline.size(); ++k)
    d = std::min(d, pointSegmentDist(q, polyline[k],
                                     polyline[(k + 1) % polyline.size()]));
  return insideConvexPolyline(q, polyline) ? -d : d;
}

ConvexGauge discGauge(double radius, int samples) {
  ConvexGauge g;
  g.kind = ConvexGauge::Kind::SignedDistance;
  g.polyline.reserve(samples);
  for (int k = 0; k < samples; ++k)
    g.polyline.push_back(std::polar(radius, 2.0 * M_PI * k / samples));
  return g;
}

ConvexGauge ellipseGauge(double a, double b, int samples) {
  ConvexGauge g;
  g.kind = ConvexGauge::Kind::SignedDistance;
  g.polyline.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    const double th = 2.0 * M_PI * k / samples;
    g.polyline.push_back({a * std::cos(th), b * std::sin(th)});
  }
  return g;
}

ConvexGauge polygonGauge(const std::vector<Complex>& vertices,
                         int samplesPerEdge) {
  ConvexGauge g;
  g.kind = ConvexGauge::Kind::SignedDistance;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const Complex a = vertices[k];
    const Complex b = vertices[(k + 1) % vertices.size()];
    for (int s = 0; s < samplesPerEdge; ++s)
      g.polyline.push_back(a + (b - a) * (double(s) / samplesPerEdge));
  }
  return g;
}

ConvexGauge centerGauge(const ConformalMetric& rho, Complex center) {
  ConvexGauge g;
  g.kind = ConvexGauge::Kind::CenterDistance;
  g.center = center;
  g.rho = &rho;
  return g;
}

GaugeConvexityReport gaugeConvexityCheck(const ConvexGauge& gauge,
                                         const ConformalMetric& rho,
                                         const std::vector<Complex>& samples,
                                         int pairs, std::uint64_t seed) {
  GaugeConvexityReport rep;
  if (samples.size() < 2) return rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
  const bool flat = rho.preset() == ConformalMetric::Preset::Flat;
  for (int k = 0; k < pairs; ++k) {
    const Complex a = samples[pick(rng)];
    const Complex b = samples[pick(rng)];
    if (std::abs(a - b) < 1e-9) continue;
    Complex mid;
    if (flat) {
      mid = 0.5 * (a + b);
    } else {
      try {
        mid = expMap(rho, a, 0.5 * logMap(rho, a, b));
      } catch (const std::runtime_error&) {
        continue;
      }
    }
    const double excess = gauge.eval(mid) - 0.5 * (gauge.eval(a) + gauge.eval(b));
    rep.worstExcess = std::max(rep.worstExcess, excess);
    ++rep.pairs;
  }
  return rep;
}

MaxPrincipleReport maxPrincipleCheck(
    const MapField& field, const std::function<double(Complex)>& gauge) {
  const DomainGrid& g = *field.grid;
  MaxPrincipleReport rep;
  rep.supInterior = -1e300;
  rep.supBoundary = -1e300;
  for (int id = 0; id < g.numNodes(); ++id) {
    const double v = gauge(field.values[id]);
    if (g.isInterior(id))
      rep.supInterior = std::max(rep.supInterior, v);
    else
      rep.supBoundary = std::max(rep.supBoundary, v);
  }
  rep.margin = rep.supInterior - rep.supBoundary;
  return rep;
}

ConvexCompositionReport convexCompositionCheck(
    const MapField& field, const EnergyParams& params,
    const ConformalMetric& sigma, const ConformalMetric& rho,
    const std::function<double(Complex)>& gauge, double kinkBand) {
  const DomainGrid& g = *field.grid;
  const Eigen::ArrayXd lam = lambdaField(field, params, sigma, rho);
  MapField lamF = makeField(g);
  lamF.values = lam.cast<Complex>();
  const WirtingerFields dLam = wirtinger(lamF);

  Eigen::ArrayXd G(g.numNodes());
  for (int id = 0; id < g.numNodes(); ++id) G[id] = gauge(field.values[id]);
  MapField GF = makeField(g);
  GF.values = G.cast<Complex>();
  const WirtingerFields dG = wirtinger(GF);
  const Eigen::ArrayXd lapG = discreteLaplacian(g, G);

  ConvexCompositionReport rep;
  rep.worst = 1e300;
  for (int id = 0; id < g.interiorCount; ++id) {
    if (!g.healthyStencil[id]) continue;
    if (std::abs(G[id]) < kinkBand) {
      ++rep.skipped;
      continue;
    }
    const double L = 0.5 * lam[id] * lapG[id] +
                     2.0 * (std::conj(dLam.uz[id]) * dG.uz[id]).real();
    rep.worst = std::min(rep.worst, L);
    ++rep.tested;
  }
  if (rep.tested == 0) rep.worst = 0.0;
  return rep;
}

BoundaryJacobianReport boundaryJacobianCheck(const MapField& field,
                                             const ConformalMetric& sigma,
                                             const ConformalMetric& rho) {
  const DomainGrid& g = *field.grid;
  const WirtingerFields w = wirtinger(field);
  BoundaryJacobianReport rep;
  const int nb = g.boundaryCount;
  rep.values.resize(nb);
  rep.min = 1e300;
  for (int k = 0; k < nb; ++k) {
    const int id = g.boundaryLoop[k];
    const int prev = g.boundaryLoop[(k + nb - 1) % nb];
    const int next = g.boundaryLoop[(k + 1) % nb];
    const double thC = g.nodes[id].theta;
    double dPrev = thC - g.nodes[prev].theta;
    if (dPrev <= 0) dPrev += 2.0 * M_PI;
    double dNext = g.nodes[next].theta - thC;
    if (dNext <= 0) dNext += 2.0 * M_PI;
    // Tangential derivative (arc length) from the loop values, exact to
    // second order; normal derivative from the one-sided fit.
    const Complex uPrev = field.values[prev], uC = field.values[id],
                  uNext = field.values[next];
    const Complex ut = (-dNext / (dPrev * (dPrev + dNext))) * uPrev +
                       ((dNext - dPrev) / (dPrev * dNext)) * uC +
                       (dPrev / (dNext * (dPrev + dNext))) * uNext;
    const Complex ux = w.uz[id] + w.uzbar[id];
    const Complex uy = Complex{0, 1} * (w.uz[id] - w.uzbar[id]);
    const double cs = std::cos(thC), sn = std::sin(thC);
    const Complex un = cs * ux + sn * uy;
    const double jChart = (std::conj(un) * ut).imag();
    const double scale =
        rho.eval(uC) / sigma.eval(g.nodes[id].pos);
    rep.values[k] = scale * jChart;
    rep.min = std::min(rep.min, rep.values[k]);
  }
  return rep;
}

SuperharmonicityReport superharmonicityCheck(const MapField& field,
                                             const EnergyParams& params,
                                             const ConformalMetric& sigma,
                                             const ConformalMetric& rho,
                                             int exponentN) {
  const DomainGrid& g = *field.grid;
  const DerivedFields d = deriveFields(field, params, sigma, rho);
  SuperharmonicityReport rep;
  rep.minInteriorJ = 1e300;
  for (int id = 0; id < g.interiorCount; ++id) {
    rep.minInteriorJ = std::min(rep.minInteriorJ, d.jacobian[id]);
    if (d.jacobian[id] <= 0.0)
      throw std::domain_error(
          "superharmonicityCheck: J <= 0 at interior node " + std::to_string(id));
  }
  // Curvature sign hypotheses, sampled: K <= 0 on M, K' >= 0 on the image.
  for (int id = 0; id < g.numNodes(); id += 7) {
    if (gaussCurvature(sigma, g.nodes[id].pos) > 1e-9)
      rep.curvatureHypothesisMet = false;
    if (gaussCurvature(rho, field.values[id]) < -1e-9)
      rep.curvatureHypothesisMet = false;
  }

  Eigen::ArrayXd W(g.numNodes());
  for (int id = 0; id < g.numNodes(); ++id)
    W[id] = -std::pow(d.tfield[id], -double(exponentN));
  const Eigen::ArrayXd lapW = discreteLaplacian(g, W);

  MapField tf = makeField(g);
  tf.values = d.tfield.cast<Complex>();
  const WirtingerFields dT = wirtinger(tf);
  const Eigen::ArrayXd lapT = discreteLaplacian(g, d.tfield);

  rep.worstLaplacian = -1e300;
  rep.worstIenq = -1e300;
  for (int id = 0; id < g.interiorCount; ++id) {
    if (!g.healthyStencil[id]) continue;
    rep.worstLaplacian = std::max(rep.worstLaplacian, lapW[id]);
    const double sg = sigma.eval(g.nodes[id].pos);
    const double ienq = (d.tfield[id] * lapT[id] / 4.0 -
                         (exponentN + 1.0) * std::norm(dT.uz[id])) /
                        sg;
    rep.worstIenq = std::max(rep.worstIenq, ienq);
  }
  return rep;
}

MinimumPrincipleReport minimumPrincipleCheck(const MapField& field,
                                             const EnergyParams& params,
                                             const ConformalMetric& sigma,
                                             const ConformalMetric& rho,
                                             const std::vector<double>& radii) {
  const DomainGrid& g = *field.grid;
  const Eigen::ArrayXd T = tField(field, params, sigma, rho);
  MinimumPrincipleReport rep;
  rep.radii = radii;
  rep.supT = T.maxCoeff();
  rep.worstMargin = 1e300;
  for (double r : radii) {
    double infK = 1e300, infBd = 1e300;
    for (int id = 0; id < g.interiorCount; ++id) {
      if (std::abs(g.nodes[id].pos) > r) continue;
      infK = std::min(infK, T[id]);
      bool onRim = false;
      for (int d4 = 0; d4 < 4; ++d4) {
        const int nb = g.nb5[id][d4];
        if (std::abs(g.nodes[nb].pos) > r) onRim = true;
      }
      if (onRim) infBd = std::min(infBd, T[id]);
    }
    const double margin = infK - infBd;
    rep.margins.push_back(margin);
    rep.worstMargin = std::min(rep.worstMargin, margin);
  }
  return rep;
}

double calibrateSuperharmCtol(const DomainGrid& grid) {
  const ConformalMetric flat = ConformalMetric::flat();
  const EnergyParams params{2.0, 0.0};
  const BoundaryData data = [](double th) {
    return std::polar(1.0, th + 0.3 * std::sin(th));
  };
  const MapField u = harmonicInit(grid, data);
  MapField f = u;
  const DerivedFields d = deriveFields(f, params, flat, flat);
  Eigen::ArrayXd W(grid.numNodes());
  for (int id = 0; id < grid.numNodes(); ++id)
    W[id] = -std::pow(std::max(d.tfield[id], 1e-12), -1.0);
  const Eigen::ArrayXd lapW = discreteLaplacian(grid, W);
  double worst = 0.0;
  for (int id = 0; id < grid.interiorCount; ++id)
    if (grid.healthyStencil[id]) worst = std::max(worst, lapW[id]);
  return 3.0 * std::max(worst, 1e-12) / grid.h;
}

CertificateReport certifyField(const MapField& field, const EnergyParams& params,
                               const ConformalMetric& sigma,
                               const ConformalMetric& rho,
                               const ConvexGauge& gauge,
                               const CertifyConfig& config) {
  const DomainGrid& g = *field.grid;
  CertificateReport rep;

  const auto gaugeFn = [&](Complex q) { return gauge.eval(q); };
  const MaxPrincipleReport mp = maxPrincipleCheck(field, gaugeFn);
  rep.imageInteriorSup = mp.supInterior;
  rep.imageMaxSignedDistance = std::max(mp.supInterior, mp.supBoundary);
  rep.passedImage = rep.imageMaxSignedDistance <= config.imageTol &&
                    mp.supInterior < 0.0;

  {
    std::vector<Complex> samples;
    for (int id = 0; id < g.numNodes(); id += 5)
      samples.push_back(field.values[id]);
    rep.gaugeConvexityWorst =
        gaugeConvexityCheck(gauge, rho, samples, 400).worstExcess;
  }

  const BoundaryJacobianReport bj = boundaryJacobianCheck(field, sigma, rho);
  rep.boundaryJacobianMin = bj.min;
  rep.passedBoundaryJacobian = bj.min > 0.0;

  const Eigen::ArrayXd J = jacobianField(field, sigma, rho);
  rep.interiorJacobianMin = 1e300;
  for (int id = 0; id < g.interiorCount; ++id)
    rep.interiorJacobianMin = std::min(rep.interiorJacobianMin, J[id]);
  rep.passedInteriorJacobian = rep.interiorJacobianMin > 0.0;

  const auto [aLo, aHi] = alphaBounds(params);
  rep.subharmonicityN = subharmonicityExponent(aLo, aHi);

  const double ctol = config.superharmCtol > 0.0 ? config.superharmCtol
                                                 : calibrateSuperharmCtol(g);
  rep.superharmonicityTol = ctol * g.h;
  if (rep.passedInteriorJacobian) {
    const SuperharmonicityReport sh =
        superharmonicityCheck(field, params, sigma, rho, rep.subharmonicityN);
    rep.superharmonicityWorst = sh.worstLaplacian;
    rep.ienqWorst = sh.worstIenq;
    rep.curvatureHypothesisMet = sh.curvatureHypothesisMet;
    rep.passedSuperharmonicity =
        !sh.curvatureHypothesisMet ||
        sh.worstLaplacian <= rep.superharmonicityTol;
  } else {
    rep.superharmonicityWorst = std::nan("");
    rep.passedSuperharmonicity = false;
  }

  const MinimumPrincipleReport mpr =
      minimumPrincipleCheck(field, params, sigma, rho, config.shrinkRadii);
  rep.minPrincipleRadii = mpr.radii;
  rep.minPrincipleMargins = mpr.margins;
  rep.minimumPrincipleMargin = mpr.worstMargin;
  rep.minPrincipleTol = config.minPrincipleFactor * std::abs(mpr.supT);
  rep.passedMinimumPrinciple = mpr.worstMargin >= -rep.minPrincipleTol;

  const double kinkBand = config.kinkBandFactor * g.h;
  const ConvexCompositionReport cc =
      convexCompositionCheck(field, params, sigma, rho, gaugeFn, kinkBand);
  rep.convexCompositionWorst = cc.worst;
  // Scale tolerance by the typical magnitude of the tested operator values.
  double scale = 0.0;
  {
    const Eigen::ArrayXd lam = lambdaField(field, params, sigma, rho);
    scale = lam.abs().maxCoeff() + 1e-12;
  }
  rep.convexCompositionTol = config.convexCompFactor * g.h * scale;
  rep.passedConvexComposition = cc.worst >= -rep.convexCompositionTol;

  rep.passed = rep.passedImage && rep.passedBoundaryJacobian &&
               rep.passedInteriorJacobian && rep.passedSuperharmonicity &&
               rep.passedMinimumPrinciple && rep.passedConvexComposition;
  return rep;
}

namespace {

double lpDistance(const DomainGrid& g, const ConformalMetric& sigma,
                  const ConformalMetric& rho, const MapField& ref,
                  const WirtingerFields& wa, const WirtingerFields& wb,
                  double p) {
  Eigen::ArrayXd integrand(g.numNodes());
  for (int id = 0; id < g.numNodes(); ++id) {
    const double ratio = rho.eval(ref.values[id]) / sigma.eval(g.nodes[id].pos);
    const double s = ratio * (std::norm(wa.uz[id] - wb.uz[id]) +
                              std::norm(wa.uzbar[id] - wb.uzbar[id]));
    integrand[id] = std::pow(s, 0.5 * p);
  }
  return std::pow(integrate(g, integrand, sigma), 1.0 / p);
}

}  // namespace

SweepReport epsilonSweep(const DomainGrid& grid, const ConformalMetric& sigma,
                         const ConformalMetric& rho, double p,
                         const BoundaryData& data, std::vector<double> epsList,
                         const SolveConfig& config, int jobs) {
  std::sort(epsList.begin(), epsList.end(), std::greater<double>());
  if (epsList.empty() || epsList.back() != 0.0)
    throw std::invalid_argument("epsilonSweep: eps list must end with 0");

  SweepReport rep;
  const MapField competitor = harmonicInit(grid, data);

  std::vector<SolveResult> sols(epsList.size());
  const auto solveOne = [&](std::size_t k) {
    return solveDirichlet(grid, sigma, rho, EnergyParams{p, epsList[k]}, data,
                          config);
  };
  if (jobs > 1) {
    std::vector<std::future<SolveResult>> futs;
    for (std::size_t k = 0; k < epsList.size(); ++k)
      futs.push_back(std::async(std::launch::async, solveOne, k));
    for (std::size_t k = 0; k < epsList.size(); ++k) sols[k] = futs[k].get();
  } else {
    for (std::size_t k = 0; k < epsList.size(); ++k) sols[k] = solveOne(k);
  }

  rep.allConverged = true;
  const std::size_t refIdx = epsList.size() - 1;
  const EnergyParams refParams{p, 0.0};
  const DerivedFields dref =
      deriveFields(sols[refIdx].field, refParams, sigma, rho);

  // Grid-dependent floor: h^2 times the reference differential norm.
  {
    Eigen::ArrayXd integrand = dref.duNormSq.pow(0.5 * p);
    rep.noiseFloor =
        grid.h * grid.h * std::pow(integrate(grid, integrand, sigma), 1.0 / p);
  }

  for (std::size_t k = 0; k < epsList.size(); ++k) {
    SweepEntry e;
    e.eps = epsList[k];
    e.converged = sols[k].converged;
    e.energy = sols[k].finalEnergy;
    e.iterations = sols[k].iterations;
    rep.allConverged = rep.allConverged && e.converged;

    const EnergyParams pk{p, epsList[k]};
    const DerivedFields dk = deriveFields(sols[k].field, pk, sigma, rho);
    if (k != refIdx) {
      e.lpDist = lpDistance(grid, sigma, rho, sols[refIdx].field, dk.w, dref.w, p);
      for (int id = 0; id < grid.numNodes(); ++id) {
        if (std::abs(grid.nodes[id].pos) > 0.7) continue;
        const double jvK = std::norm(dk.v1[id]) - std::norm(dk.v2[id]);
        const double jv0 = std::norm(dref.v1[id]) - std::norm(dref.v2[id]);
        e.supJVdiff = std::max(e.supJVdiff, std::abs(jvK - jv0));
        e.supJVdiffMetric = std::max(
            e.supJVdiffMetric, std::abs(dk.tfield[id] - dref.tfield[id]));
      }
    }
    // Interior W^{1,2} quantities for the V pair on B_R, R = 0.7.
    {
      const double R = 0.7;
      MapField v1f = makeField(grid), v2f = makeField(grid);
      v1f.values = dk.v1;
      v2f.values = dk.v2;
      const WirtingerFields dV1 = wirtinger(v1f);
      const WirtingerFields dV2 = wirtinger(v2f);
      double lhs = 0.0;
      Complex mean1{0, 0}, mean2{0, 0};
      double areaR = 0.0;
      for (int id = 0; id < grid.interiorCount; ++id) {
        const double r = std::abs(grid.nodes[id].pos);
        const double w = grid.quadWeight[id] * sigma.eval(grid.nodes[id].pos);
        if (r <= R) {
          mean1 += w * dk.v1[id];
          mean2 += w * dk.v2[id];
          areaR += w;
        }
        if (r <= R / 2.0)
          lhs += w * (std::norm(dV1.uz[id]) + std::norm(dV1.uzbar[id]) +
                      std::norm(dV2.uz[id]) + std::norm(dV2.uzbar[id]));
      }
      mean1 /= areaR;
      mean2 /= areaR;
      double osc = 0.0, energyR = 0.0;
      const double e2 = epsList[k] * epsList[k];
      for (int id = 0; id < grid.interiorCount; ++id) {
        if (std::abs(grid.nodes[id].pos) > R) continue;
        const double w = grid.quadWeight[id] * sigma.eval(grid.nodes[id].pos);
        osc += w * (std::norm(dk.v1[id] - mean1) + std::norm(dk.v2[id] - mean2));
        energyR += w * std::pow(e2 + dk.duNormSq[id], 0.5 * p);
      }
      e.lem95lhs = lhs;
      e.lem95rhs = osc / (R * R) + energyR;
    }
    e.cacRatio =
        caccioppoliRatio(sols[k], pk, sigma, rho, competitor).ratio;
    rep.entries.push_back(e);
  }

  rep.distancesMonotone = true;
  rep.jvMonotone = true;
  for (std::size_t k = 1; k + 1 < epsList.size(); ++k) {
    if (rep.entries[k].lpDist > 1.1 * rep.entries[k - 1].lpDist)
      rep.distancesMonotone = false;
    if (rep.entries[k].supJVdiff > 1.1 * rep.entries[k - 1].supJVdiff)
      rep.jvMonotone = false;
  }
  if (epsList.size() > 1) rep.finalDist = rep.entries[epsList.size() - 2].lpDist;
  return rep;
}

}  // namespace phsurf
