#ifndef PHSURF_ENERGY_HPP
#define PHSURF_ENERGY_HPP

#include <array>
#include <utility>

#include "phsurf/grid.hpp"

namespace phsurf {

struct EnergyParams {
  double p = 2.0;
  double eps = 0.0;
  void validate() const;
};

/// Pointwise quantities of a map, nodal, from the Wirtinger derivative fields.
struct DerivedFields {
  Eigen::ArrayXd duNormSq;  // (rho/sigma)(|u_z|^2 + |u_zbar|^2)
  Eigen::ArrayXd jacobian;  // (rho/sigma)(|u_z|^2 - |u_zbar|^2)
  Eigen::ArrayXd lambda;    // (eps^2 + |Du|^2)^((p-2)/2)
  Eigen::ArrayXd tfield;    // lambda * jacobian
  Eigen::ArrayXcd v1, v2;   // (eps^2 + |Du|^2)^((p-2)/4) (u_z, u_zbar)
  WirtingerFields w;
};

DerivedFields deriveFields(const MapField& field, const EnergyParams& params,
                           const ConformalMetric& sigma,
                           const ConformalMetric& rho);

Eigen::ArrayXd duNormSq(const MapField& field, const ConformalMetric& sigma,
                        const ConformalMetric& rho);
Eigen::ArrayXd jacobianField(const MapField& field, const ConformalMetric& sigma,
                             const ConformalMetric& rho);
Eigen::ArrayXd lambdaField(const MapField& field, const EnergyParams& params,
                           const ConformalMetric& sigma,
                           const ConformalMetric& rho);
Eigen::ArrayXd tField(const MapField& field, const EnergyParams& params,
                      const ConformalMetric& sigma, const ConformalMetric& rho);

struct VFields {
  Eigen::ArrayXcd v1, v2;
};
VFields vField(const MapField& field, const EnergyParams& params,
               const ConformalMetric& sigma, const ConformalMetric& rho);

/// Total energy int (eps^2 + |Du|^2)^(p/2) dV_M over the exact triangulation
/// of the clipped disc. Affine maps are exact critical points of this
/// discrete functional with flat target metric.
double energyValue(const MapField& field, const EnergyParams& params,
                   const ConformalMetric& sigma, const ConformalMetric& rho);

/// Exact first variation of energyValue with respect to interior nodal
/// values: directional derivative along delta is Re sum grad_k conj(delta_k).
Eigen::ArrayXcd energyGradient(const MapField& field, const EnergyParams& params,
                               const ConformalMetric& sigma,
                               const ConformalMetric& rho);

/// Strong-form residual [lambda u_z]_zbar + [lambda u_zbar]_z
/// + 2 lambda (dlog rho/du) u_z u_zbar at interior nodes. Diagnostic only;
/// the solver drives the variational gradient.
Eigen::ArrayXcd elResidual(const MapField& field, const EnergyParams& params,
                           const ConformalMetric& sigma,
                           const ConformalMetric& rho);

/// Bounds of alpha = |Du|^2 E''/E' for the (eps^2+t)^(p/2) family.
std::pair<double, double> alphaBounds(const EnergyParams& params);

/// Smallest admissible exponent for the -T^(-N) supersolution statement:
/// N = ceil(max over the alpha interval of C^2/(1-C^2)) + 1,
/// C = |alpha|/(2 + 2 alpha - |alpha|), minimum 1.
int subharmonicityExponent(double alphaLo, double alphaHi);

struct MonotonicityGap {
  double lhsGap = 0.0;       // <F(X)-F(Y), X-Y> with F(X) = (eps^2+|X|^2)^((p-2)/2) X
  double rhsBound = 0.0;     // (eps^2+|X|^2+|Y|^2)^((p-2)/2) |X-Y|^2
  double aux2Quotient = 0.0; // |F(X)-F(Y)| / (((eps^2+|X|^2)^q+(eps^2+|Y|^2)^q)|X-Y|)
};

MonotonicityGap monotonicityGap(const std::array<Complex, 2>& X,
                                const std::array<Complex, 2>& Y,
                                const EnergyParams& params);

}  // namespace phsurf

#endif
