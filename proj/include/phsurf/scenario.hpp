#ifndef PHSURF_SCENARIO_HPP
#define PHSURF_SCENARIO_HPP

#include <string>

#include "phsurf/homotopy.hpp"

namespace phsurf {

/// A fully specified experiment: metrics, target region, boundary data,
/// exponents, grid, and run kind. Serialized as flat key = value sections;
/// metrics and data are named presets with numeric parameters only.
struct Scenario {
  std::string name = "unnamed";

  std::string sigmaName = "flat";
  std::string rhoName = "flat";
  double bumpAmp = 0.5;
  double bumpWidth = 0.6;

  enum class Target { Disc, Ellipse, Polygon };
  Target targetKind = Target::Disc;
  double discRadius = 1.0;
  double ellipseA = 1.0, ellipseB = 0.6;
  std::vector<Complex> polygon;

  enum class Data { Circle, Ellipse, EllipseUniform, Fourier };
  Data dataKind = Data::Circle;
  double dataWobble = 0.0;  // circle preset: phi = R exp(i(th + wobble sin th))
  Complex fourierC0{0, 0}, fourierC1{1, 0}, fourierC2{0, 0}, fourierCm1{0, 0};

  double p = 2.0;
  std::vector<double> epsList = {0.0};

  int gridN = 64;
  enum class Run { Solve, Homotopy, Certify, Sweep, Geodesics };
  Run run = Run::Solve;
  int homotopySteps = 16;
  bool exponentOnly = false;
  std::uint64_t seed = 12345;
  int jobs = 1;

  /// Throws std::invalid_argument naming the offending key.
  void validate() const;
  std::string serialize() const;
  static Scenario parse(const std::string& text);
  static Scenario parseFile(const std::string& path);
  bool operator==(const Scenario& other) const;

  ConformalMetric sigmaMetric() const;
  ConformalMetric rhoMetric() const;
  BoundaryData boundaryData() const;
  std::function<double(double)> boundarySpeed() const;
  ConvexGauge gauge() const;
  std::shared_ptr<const TargetCurve> targetCurve() const;
  double firstEps() const { return epsList.front(); }
};

std::vector<std::string> listScenarios();
Scenario bundledScenario(const std::string& name);

/// Executes the scenario, writing report.json (and fields.csv / trace.jsonl
/// where applicable) under outDir. Returns the process exit code: for
/// certify runs 0 iff every applicable check passed.
int runScenario(const Scenario& s, const std::string& outDir);

void dumpFieldsCsv(const MapField& field, const DerivedFields* derived,
                   const std::string& path);

}  // namespace phsurf

#endif
