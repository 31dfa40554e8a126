#include "phsurf/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace phsurf {

void EnergyParams::validate() const {
  if (!(p >= 2.0)) throw std::invalid_argument("EnergyParams: p must be >= 2");
  if (!(eps >= 0.0 && eps < 1.0))
    throw std::invalid_argument("EnergyParams: eps must lie in [0, 1)");
}

namespace {

Eigen::ArrayXd metricRatio(const DomainGrid& g, const Eigen::ArrayXcd& u,
                           const ConformalMetric& sigma,
                           const ConformalMetric& rho) {
  Eigen::ArrayXd r(g.numNodes());
  for (int id = 0; id < g.numNodes(); ++id)
    r[id] = rho.eval(u[id]) / sigma.eval(g.nodes[id].pos);
  return r;
}

}  // namespace

DerivedFields deriveFields(const MapField& field, const EnergyParams& params,
                           const ConformalMetric& sigma,
                           const ConformalMetric& rho) {
  params.validate();
  const DomainGrid& g = *field.grid;
  DerivedFields d;
  d.w = wirtinger(field);
  const Eigen::ArrayXd ratio = metricRatio(g, field.values, sigma, rho);
  const Eigen::ArrayXd zpair = d.w.uz.abs2() + d.w.uzbar.abs2();
  d.duNormSq = ratio * zpair;
  d.jacobian = ratio * (d.w.uz.abs2() - d.w.uzbar.abs2());
  const double e2 = params.eps * params.eps;
  d.lambda = (e2 + d.duNormSq).pow(0.5 * (params.p - 2.0));
  d.tfield = d.lambda * d.jacobian;
  const Eigen::ArrayXd s = (e2 + d.duNormSq).pow(0.25 * (params.p - 2.0));
  d.v1 = s * d.w.uz;
  d.v2 = s * d.w.uzbar;
  return d;
}

Eigen::ArrayXd duNormSq(const MapField& field, const ConformalMetric& sigma,
                        const ConformalMetric& rho) {
  const WirtingerFields w = wirtinger(field);
  return metricRatio(*field.grid, field.values, sigma, rho) *
         (w.uz.abs2() + w.uzbar.abs2());
}

Eigen::ArrayXd jacobianField(const MapField& field, const ConformalMetric& sigma,
                             const ConformalMetric& rho) {
  const WirtingerFields w = wirtinger(field);
  return metricRatio(*field.grid, field.values, sigma, rho) *
         (w.uz.abs2() - w.uzbar.abs2());
}

Eigen::ArrayXd lambdaField(const MapField& field, const EnergyParams& params,
                           const ConformalMetric& sigma,
                           const ConformalMetric& rho) {
  params.validate();
  const double e2 = params.eps * params.eps;
  return (e2 + duNormSq(field, sigma, rho)).pow(0.5 * (params.p - 2.0));
}

Eigen::ArrayXd tField(const MapField& field, const EnergyParams& params,
                      const ConformalMetric& sigma, const ConformalMetric& rho) {
  const DerivedFields d = deriveFields(field, params, sigma, rho);
  return d.tfield;
}

VFields vField(const MapField& field, const EnergyParams& params,
               const ConformalMetric& sigma, const ConformalMetric& rho) {
  const DerivedFields d = deriveFields(field, params, sigma, rho);
  return {d.v1, d.v2};
}

double energyValue(const MapField& field, const EnergyParams& params,
                   const ConformalMetric& sigma, const ConformalMetric& rho) {
  params.validate();
  const DomainGrid& g = *field.grid;
  const auto& u = field.values;
  const double e2 = params.eps * params.eps;
  double total = 0.0;
  for (const auto& tri : g.tris) {
    Complex a{0, 0}, b{0, 0}, m{0, 0};
    for (int k = 0; k < 3; ++k) {
      a += tri.alpha[k] * u[tri.v[k]];
      b += tri.beta[k] * u[tri.v[k]];
      m += u[tri.v[k]] / 3.0;
    }
    const double S = std::norm(a) + std::norm(b);
    const double sc = sigma.eval(tri.centroid);
    const double Q = e2 + rho.eval(m) / sc * S;
    total += tri.area * sc * std::pow(Q, 0.5 * params.p);
  }
  return total;
}

Eigen::ArrayXcd energyGradient(const MapField& field, const EnergyParams& params,
                               const ConformalMetric& sigma,
                               const ConformalMetric& rho) {
  params.validate();
  const DomainGrid& g = *field.grid;
  const auto& u = field.values;
  const double e2 = params.eps * params.eps;
  Eigen::ArrayXcd grad = Eigen::ArrayXcd::Zero(g.numNodes());
  for (const auto& tri : g.tris) {
    Complex a{0, 0}, b{0, 0}, m{0, 0};
    for (int k = 0; k < 3; ++k) {
      a += tri.alpha[k] * u[tri.v[k]];
      b += tri.beta[k] * u[tri.v[k]];
      m += u[tri.v[k]] / 3.0;
    }
    const double S = std::norm(a) + std::norm(b);
    const double sc = sigma.eval(tri.centroid);
    const double R = rho.eval(m);
    const double Q = e2 + R / sc * S;
    const double outer = tri.area * params.p * std::pow(Q, 0.5 * params.p - 1.0);
    const Complex rhoTerm = std::conj(R * rho.logDeriv(m)) / 3.0;
    for (int k = 0; k < 3; ++k) {
      const int id = tri.v[k];
      if (!g.isInterior(id)) continue;
      grad[id] += outer * (S * rhoTerm +
                           R * (a * std::conj(tri.alpha[k]) +
                                b * std::conj(tri.beta[k])));
    }
  }
  return grad;
}

Eigen::ArrayXcd elResidual(const MapField& field, const EnergyParams& params,
                           const ConformalMetric& sigma,
                           const ConformalMetric& rho) {
  params.validate();
  const DomainGrid& g = *field.grid;
  const WirtingerFields w = wirtinger(field);
  const Eigen::ArrayXd lam = lambdaField(field, params, sigma, rho);
  MapField P = makeField(g), Q = makeField(g);
  P.values = lam * w.uz;
  Q.values = lam * w.uzbar;
  const WirtingerFields dP = wirtinger(P);
  const WirtingerFields dQ = wirtinger(Q);
  Eigen::ArrayXcd res = Eigen::ArrayXcd::Zero(g.numNodes());
  for (int id = 0; id < g.interiorCount; ++id) {
    const Complex A = rho.logDeriv(field.values[id]);
    res[id] = dP.uzbar[id] + dQ.uz[id] + 2.0 * lam[id] * A * w.uz[id] * w.uzbar[id];
  }
  return res;
}

std::pair<double, double> alphaBounds(const EnergyParams& params) {
  params.validate();
  const double top = 0.5 * (params.p - 2.0);
  if (params.eps == 0.0) return {top, top};
  return {0.0, top};
}

int subharmonicityExponent(double alphaLo, double alphaHi) {
  if (alphaLo <= -0.49)
    throw std::invalid_argument(
        "subharmonicityExponent: alpha lower bound too close to -1/2");
  if (alphaHi < alphaLo)
    throw std::invalid_argument("subharmonicityExponent: empty alpha interval");
  double worst = 0.0;
  for (double alpha : {alphaLo, alphaHi}) {
    const double C = std::abs(alpha) / (2.0 + 2.0 * alpha - std::abs(alpha));
    worst = std::max(worst, C * C / (1.0 - C * C));
  }
  const int n = static_cast<int>(std::ceil(worst)) + 1;
  return std::max(n, 1);
}

MonotonicityGap monotonicityGap(const std::array<Complex, 2>& X,
                                const std::array<Complex, 2>& Y,
                                const EnergyParams& params) {
  params.validate();
  MonotonicityGap gap;
  const double e2 = params.eps * params.eps;
  const double nx = std::norm(X[0]) + std::norm(X[1]);
  const double ny = std::norm(Y[0]) + std::norm(Y[1]);
  const double q = 0.5 * (params.p - 2.0);
  const double fx = std::pow(e2 + nx, q);
  const double fy = std::pow(e2 + ny, q);
  const Complex d0 = X[0] - Y[0], d1 = X[1] - Y[1];
  const double dn = std::norm(d0) + std::norm(d1);
  if (dn == 0.0) return gap;
  const Complex g0 = fx * X[0] - fy * Y[0];
  const Complex g1 = fx * X[1] - fy * Y[1];
  gap.lhsGap = g0.real() * d0.real() + g0.imag() * d0.imag() +
               g1.real() * d1.real() + g1.imag() * d1.imag();
  gap.rhsBound = std::pow(e2 + nx + ny, q) * dn;
  const double num = std::sqrt(std::norm(g0) + std::norm(g1));
  gap.aux2Quotient = num / ((fx + fy) * std::sqrt(dn));
  return gap;
}

}  // namespace phsurf
