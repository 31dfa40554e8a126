#include "phsurf/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace phsurf {

using Json = nlohmann::ordered_json;

namespace {

std::string runName(Scenario::Run r) {
  switch (r) {
    case Scenario::Run::Solve: return "solve";
    case Scenario::Run::Homotopy: return "homotopy";
    case Scenario::Run::Certify: return "certify";
    case Scenario::Run::Sweep: return "sweep";
    case Scenario::Run::Geodesics: return "geodesics";
  }
  return "solve";
}

Scenario::Run runFromName(const std::string& s) {
  if (s == "solve") return Scenario::Run::Solve;
  if (s == "homotopy") return Scenario::Run::Homotopy;
  if (s == "certify") return Scenario::Run::Certify;
  if (s == "sweep") return Scenario::Run::Sweep;
  if (s == "geodesics") return Scenario::Run::Geodesics;
  throw std::invalid_argument("scenario.run: unknown run kind '" + s + "'");
}

std::string targetName(Scenario::Target t) {
  switch (t) {
    case Scenario::Target::Disc: return "disc";
    case Scenario::Target::Ellipse: return "ellipse";
    case Scenario::Target::Polygon: return "polygon";
  }
  return "disc";
}

std::string dataName(Scenario::Data d) {
  switch (d) {
    case Scenario::Data::Circle: return "circle";
    case Scenario::Data::Ellipse: return "ellipse";
    case Scenario::Data::EllipseUniform: return "ellipse-uniform";
    case Scenario::Data::Fourier: return "fourier";
  }
  return "circle";
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parseList(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace

void Scenario::validate() const {
  if (gridN < 8) throw std::invalid_argument("scenario.grid_n: must be >= 8");
  if (!(p >= 2.0)) throw std::invalid_argument("params.p: must be >= 2");
  if (epsList.empty()) throw std::invalid_argument("params.eps: missing");
  for (double e : epsList)
    if (!(e >= 0.0 && e < 1.0))
      throw std::invalid_argument("params.eps: entries must lie in [0, 1)");
  ConformalMetric::byName(sigmaName, bumpAmp, bumpWidth);
  ConformalMetric::byName(rhoName, bumpAmp, bumpWidth);
  if (targetKind == Target::Ellipse && !(ellipseA > 0.0 && ellipseB > 0.0))
    throw std::invalid_argument("target.a/target.b: must be positive");
  if (targetKind == Target::Disc && !(discRadius > 0.0))
    throw std::invalid_argument("target.radius: must be positive");
  if (targetKind == Target::Polygon) {
    if (polygon.size() < 3)
      throw std::invalid_argument("target.polygon: needs >= 3 vertices");
    // Convexity by the turning test: all cross products of consecutive
    // edges nonnegative (counterclockwise).
    const int n = static_cast<int>(polygon.size());
    for (int k = 0; k < n; ++k) {
      const Complex e1 = polygon[(k + 1) % n] - polygon[k];
      const Complex e2 = polygon[(k + 2) % n] - polygon[(k + 1) % n];
      if (e1.real() * e2.imag() - e1.imag() * e2.real() < 0.0)
        throw std::invalid_argument("target.polygon: not convex (CCW)");
    }
  }
  // Boundary speed must be strictly positive on samples.
  const auto sp = boundarySpeed();
  for (int k = 0; k < 256; ++k) {
    if (!(sp(2.0 * M_PI * k / 256.0) > 0.0))
      throw std::invalid_argument("data: boundary speed must be strictly positive");
  }
  if (homotopySteps < 1)
    throw std::invalid_argument("homotopy.steps: must be >= 1");
  if (jobs < 1) throw std::invalid_argument("scenario.jobs: must be >= 1");
}

std::string Scenario::serialize() const {
  std::ostringstream ss;
  ss << "[scenario]\n";
  ss << "name = " << name << "\n";
  ss << "run = " << runName(run) << "\n";
  ss << "grid_n = " << gridN << "\n";
  ss << "seed = " << seed << "\n";
  ss << "jobs = " << jobs << "\n";
  ss << "\n[metric]\n";
  ss << "sigma = " << sigmaName << "\n";
  ss << "rho = " << rhoName << "\n";
  ss << "bump_amp = " << fmt(bumpAmp) << "\n";
  ss << "bump_width = " << fmt(bumpWidth) << "\n";
  ss << "\n[target]\n";
  ss << "kind = " << targetName(targetKind) << "\n";
  ss << "radius = " << fmt(discRadius) << "\n";
  ss << "a = " << fmt(ellipseA) << "\n";
  ss << "b = " << fmt(ellipseB) << "\n";
  if (targetKind == Target::Polygon) {
    std::ostringstream pv;
    for (std::size_t k = 0; k < polygon.size(); ++k) {
      if (k) pv << ",";
      pv << fmt(polygon[k].real()) << "," << fmt(polygon[k].imag());
    }
    ss << "polygon = " << pv.str() << "\n";
  }
  ss << "\n[data]\n";
  ss << "kind = " << dataName(dataKind) << "\n";
  ss << "wobble = " << fmt(dataWobble) << "\n";
  ss << "c0 = " << fmt(fourierC0.real()) << "," << fmt(fourierC0.imag()) << "\n";
  ss << "c1 = " << fmt(fourierC1.real()) << "," << fmt(fourierC1.imag()) << "\n";
  ss << "c2 = " << fmt(fourierC2.real()) << "," << fmt(fourierC2.imag()) << "\n";
  ss << "cm1 = " << fmt(fourierCm1.real()) << "," << fmt(fourierCm1.imag())
     << "\n";
  ss << "\n[params]\n";
  ss << "p = " << fmt(p) << "\n";
  std::ostringstream el;
  for (std::size_t k = 0; k < epsList.size(); ++k) {
    if (k) el << ",";
    el << fmt(epsList[k]);
  }
  ss << "eps_list = " << el.str() << "\n";
  ss << "\n[homotopy]\n";
  ss << "steps = " << homotopySteps << "\n";
  ss << "exponent_only = " << (exponentOnly ? "true" : "false") << "\n";
  return ss.str();
}

Scenario Scenario::parse(const std::string& text) {
  Scenario s;
  std::map<std::string, std::string> kv;
  std::string section;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: malformed line '" + line + "'");
    kv[section + "." + trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  const auto get = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto* v = get("scenario.name")) s.name = *v;
  if (auto* v = get("scenario.run")) s.run = runFromName(*v);
  if (auto* v = get("scenario.grid_n")) s.gridN = std::stoi(*v);
  if (auto* v = get("scenario.seed")) s.seed = std::stoull(*v);
  if (auto* v = get("scenario.jobs")) s.jobs = std::stoi(*v);
  if (auto* v = get("metric.sigma")) s.sigmaName = *v;
  if (auto* v = get("metric.rho")) s.rhoName = *v;
  if (auto* v = get("metric.bump_amp")) s.bumpAmp = std::stod(*v);
  if (auto* v = get("metric.bump_width")) s.bumpWidth = std::stod(*v);
  if (auto* v = get("target.kind")) {
    if (*v == "disc") s.targetKind = Target::Disc;
    else if (*v == "ellipse") s.targetKind = Target::Ellipse;
    else if (*v == "polygon") s.targetKind = Target::Polygon;
    else throw std::invalid_argument("target.kind: unknown '" + *v + "'");
  }
  if (auto* v = get("target.radius")) s.discRadius = std::stod(*v);
  if (auto* v = get("target.a")) s.ellipseA = std::stod(*v);
  if (auto* v = get("target.b")) s.ellipseB = std::stod(*v);
  if (auto* v = get("target.polygon")) {
    const auto vals = parseList(*v);
    if (vals.size() % 2 != 0)
      throw std::invalid_argument("target.polygon: odd coordinate count");
    s.polygon.clear();
    for (std::size_t k = 0; k + 1 < vals.size(); k += 2)
      s.polygon.push_back({vals[k], vals[k + 1]});
  }
  if (auto* v = get("data.kind")) {
    if (*v == "circle") s.dataKind = Data::Circle;
    else if (*v == "ellipse") s.dataKind = Data::Ellipse;
    else if (*v == "ellipse-uniform") s.dataKind = Data::EllipseUniform;
    else if (*v == "fourier") s.dataKind = Data::Fourier;
    else throw std::invalid_argument("data.kind: unknown '" + *v + "'");
  }
  if (auto* v = get("data.wobble")) s.dataWobble = std::stod(*v);
  const auto getC = [&](const std::string& key, Complex& c) {
    if (auto* v = get(key)) {
      const auto vals = parseList(*v);
      if (vals.size() != 2)
        throw std::invalid_argument(key + ": expected re,im");
      c = {vals[0], vals[1]};
    }
  };
  getC("data.c0", s.fourierC0);
  getC("data.c1", s.fourierC1);
  getC("data.c2", s.fourierC2);
  getC("data.cm1", s.fourierCm1);
  if (auto* v = get("params.p")) s.p = std::stod(*v);
  if (auto* v = get("params.eps_list")) s.epsList = parseList(*v);
  if (auto* v = get("params.eps")) s.epsList = {std::stod(*v)};
  if (auto* v = get("homotopy.steps")) s.homotopySteps = std::stoi(*v);
  if (auto* v = get("homotopy.exponent_only")) s.exponentOnly = (*v == "true");
  s.validate();
  return s;
}

Scenario Scenario::parseFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool Scenario::operator==(const Scenario& other) const {
  return serialize() == other.serialize();
}

ConformalMetric Scenario::sigmaMetric() const {
  return ConformalMetric::byName(sigmaName, bumpAmp, bumpWidth);
}

ConformalMetric Scenario::rhoMetric() const {
  return ConformalMetric::byName(rhoName, bumpAmp, bumpWidth);
}

BoundaryData Scenario::boundaryData() const {
  switch (dataKind) {
    case Data::Circle: {
      const double R = discRadius, w = dataWobble;
      return [R, w](double th) { return std::polar(R, th + w * std::sin(th)); };
    }
    case Data::Ellipse: {
      const double a = ellipseA, b = ellipseB, w = dataWobble;
      return [a, b, w](double th) {
        const double gth = th + w * std::sin(th);
        return Complex{a * std::cos(gth), b * std::sin(gth)};
      };
    }
    case Data::EllipseUniform: {
      auto curve = TargetCurve::ellipse(ellipseA, ellipseB);
      const double L = curve->length();
      return [curve, L](double th) {
        return curve->pointAtArclength(L * th / (2.0 * M_PI));
      };
    }
    case Data::Fourier: {
      const Complex c0 = fourierC0, c1 = fourierC1, c2 = fourierC2,
                    cm1 = fourierCm1;
      return [c0, c1, c2, cm1](double th) {
        const Complex e = std::polar(1.0, th);
        return c0 + c1 * e + c2 * e * e + cm1 * std::conj(e);
      };
    }
  }
  throw std::logic_error("unreachable data kind");
}

std::function<double(double)> Scenario::boundarySpeed() const {
  const BoundaryData data = boundaryData();
  return [data](double th) {
    const double d = 1e-6;
    return std::abs(data(th + d) - data(th - d)) / (2.0 * d);
  };
}

ConvexGauge Scenario::gauge() const {
  switch (targetKind) {
    case Target::Disc: return discGauge(discRadius, 16384);
    case Target::Ellipse: return ellipseGauge(ellipseA, ellipseB, 16384);
    case Target::Polygon: return polygonGauge(polygon, 512);
  }
  throw std::logic_error("unreachable target kind");
}

std::shared_ptr<const TargetCurve> Scenario::targetCurve() const {
  switch (targetKind) {
    case Target::Disc: return TargetCurve::circle(discRadius);
    case Target::Ellipse: return TargetCurve::ellipse(ellipseA, ellipseB);
    case Target::Polygon:
      throw std::invalid_argument("homotopy over polygon targets not supported");
  }
  throw std::logic_error("unreachable target kind");
}

std::vector<std::string> listScenarios() {
  return {"flat-identity",      "flat-poisson",     "ellipse-p3-certify",
          "ellipse-p4-certify", "ellipse-p3-homotopy", "ellipse-p4-sweep",
          "sphere-cap",         "geodesics-sphere"};
}

Scenario bundledScenario(const std::string& name) {
  Scenario s;
  s.name = name;
  if (name == "flat-identity") {
    s.run = Scenario::Run::Certify;
    s.dataKind = Scenario::Data::Circle;
    s.p = 2.0;
    s.epsList = {0.0};
  } else if (name == "flat-poisson") {
    s.run = Scenario::Run::Solve;
    s.dataKind = Scenario::Data::Fourier;
    s.fourierC0 = {0.2, 0.1};
    s.fourierC1 = {0.9, 0.0};
    s.fourierC2 = {0.15, 0.0};
    s.fourierCm1 = {0.0, -0.1};
    s.p = 2.0;
    s.epsList = {0.0};
  } else if (name == "ellipse-p3-certify" || name == "ellipse-p4-certify") {
    s.run = Scenario::Run::Certify;
    s.targetKind = Scenario::Target::Ellipse;
    s.dataKind = Scenario::Data::Ellipse;
    s.dataWobble = 0.25;
    s.p = (name == "ellipse-p3-certify") ? 3.0 : 4.0;
    s.epsList = {0.0};
  } else if (name == "ellipse-p3-homotopy") {
    s.run = Scenario::Run::Homotopy;
    s.targetKind = Scenario::Target::Ellipse;
    s.dataKind = Scenario::Data::Ellipse;
    s.dataWobble = 0.25;
    s.p = 3.0;
    s.epsList = {0.2};
    s.homotopySteps = 16;
  } else if (name == "ellipse-p4-sweep") {
    s.run = Scenario::Run::Sweep;
    s.targetKind = Scenario::Target::Ellipse;
    s.dataKind = Scenario::Data::Ellipse;
    s.dataWobble = 0.25;
    s.p = 4.0;
    s.epsList = {0.4, 0.2, 0.1, 0.05, 0.025, 0.0};
  } else if (name == "sphere-cap") {
    s.run = Scenario::Run::Certify;
    s.rhoName = "sphere";
    s.targetKind = Scenario::Target::Disc;
    s.discRadius = 0.3;
    s.dataKind = Scenario::Data::Circle;
    s.p = 2.0;
    s.epsList = {0.0};
  } else if (name == "geodesics-sphere") {
    s.run = Scenario::Run::Geodesics;
    s.rhoName = "sphere";
  } else {
    throw std::invalid_argument("unknown scenario: " + name);
  }
  s.validate();
  return s;
}

void dumpFieldsCsv(const MapField& field, const DerivedFields* derived,
                   const std::string& path) {
  std::ofstream out(path);
  out.precision(17);
  out << "x,y,kind,re_u,im_u";
  if (derived) out << ",duNormSq,J,lambda,T";
  out << "\n";
  const DomainGrid& g = *field.grid;
  for (int id = 0; id < g.numNodes(); ++id) {
    const auto& nd = g.nodes[id];
    out << nd.pos.real() << "," << nd.pos.imag() << ","
        << (g.isInterior(id) ? "interior" : "boundary") << ","
        << field.values[id].real() << "," << field.values[id].imag();
    if (derived)
      out << "," << derived->duNormSq[id] << "," << derived->jacobian[id] << ","
          << derived->lambda[id] << "," << derived->tfield[id];
    out << "\n";
  }
}

namespace {

Json certificateJson(const CertificateReport& rep) {
  Json j;
  j["image_max_signed_distance"] = rep.imageMaxSignedDistance;
  j["image_interior_sup"] = rep.imageInteriorSup;
  j["boundary_jacobian_min"] = rep.boundaryJacobianMin;
  j["interior_jacobian_min"] = rep.interiorJacobianMin;
  j["subharmonicity_exponent"] = rep.subharmonicityN;
  j["superharmonicity_worst"] = rep.superharmonicityWorst;
  j["superharmonicity_tol"] = rep.superharmonicityTol;
  j["ienq_worst"] = rep.ienqWorst;
  j["convex_composition_worst"] = rep.convexCompositionWorst;
  j["convex_composition_tol"] = rep.convexCompositionTol;
  j["gauge_convexity_worst"] = rep.gaugeConvexityWorst;
  j["min_principle_radii"] = rep.minPrincipleRadii;
  j["min_principle_margins"] = rep.minPrincipleMargins;
  j["minimum_principle_margin"] = rep.minimumPrincipleMargin;
  j["min_principle_tol"] = rep.minPrincipleTol;
  j["curvature_hypothesis_met"] = rep.curvatureHypothesisMet;
  j["passed"] = {{"image", rep.passedImage},
                 {"boundary_jacobian", rep.passedBoundaryJacobian},
                 {"interior_jacobian", rep.passedInteriorJacobian},
                 {"superharmonicity", rep.passedSuperharmonicity},
                 {"minimum_principle", rep.passedMinimumPrinciple},
                 {"convex_composition", rep.passedConvexComposition},
                 {"all", rep.passed}};
  return j;
}

Json solveJson(const SolveResult& r) {
  Json j;
  j["iterations"] = r.iterations;
  j["final_grad_norm"] = r.finalGradNorm;
  j["final_energy"] = r.finalEnergy;
  j["converged"] = r.converged;
  return j;
}

int runGeodesics(const Scenario& s, const std::string& outDir) {
  const ConformalMetric rho = s.rhoMetric();
  Json j;
  j["metric"] = rho.name();
  const GeodesicBall ballR = makeGeodesicBall(rho, {0, 0}, 0.1);
  const GeodesicBall ballR0 = makeGeodesicBall(rho, {0, 0}, 0.3);
  const GeodesicBall ballC = makeGeodesicBall(rho, {0, 0}, 0.2);

  const ConvexityReport conv = ballConvexityCheck(rho, ballC, 100, s.seed);
  j["triangles"] = {{"trials", conv.trials},
                    {"valid", conv.valid},
                    {"degenerate", conv.degenerate},
                    {"worst_pair_angle_sum", conv.worstPairAngleSum},
                    {"worst_gauss_bonnet_residual", conv.worstGaussBonnetResidual},
                    {"all_pair_sums_below_pi", conv.allPairSumsBelowPi}};
  const TangentReport tan = tangentGeodesicCheck(rho, ballC, 24);
  j["tangent"] = {{"min_excess", tan.minExcess},
                  {"tangency_gap", tan.tangencyGap},
                  {"passed", tan.passed}};
  const MonotonicityReport mono = increasingDistanceCheck(
      rho, {0, 0}, {1, 0}, std::polar(1.0, M_PI / 3.0), 0.3, 24);
  j["monotone_distance"] = {{"strictly_increasing", mono.strictlyIncreasing},
                            {"min_increment", mono.minIncrement}};
  const ContractionSweep cs =
      contractionQuotientSweep(rho, ballR, ballR0, 1000, s.seed, 1.0);
  j["contraction"] = {{"max_quotient_outside", cs.maxQuotientOutside},
                      {"max_deviation_inside", cs.maxDeviationInside},
                      {"pairs_outside", cs.pairsOutside}};
  // exp/log round trip margin over a deterministic sample set.
  double worstRoundTrip = 0.0;
  for (int k = 0; k < 32; ++k) {
    const Complex q = std::polar(0.05 + 0.02 * k, 0.39 * k);
    const Complex v = logMap(rho, {0, 0}, q);
    worstRoundTrip =
        std::max(worstRoundTrip, std::abs(expMap(rho, {0, 0}, v) - q));
  }
  j["exp_log_round_trip_worst"] = worstRoundTrip;

  std::ofstream out(outDir + "/report.json");
  out << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int runScenario(const Scenario& s, const std::string& outDir) {
  s.validate();
  std::filesystem::create_directories(outDir);

  if (s.run == Scenario::Run::Geodesics) return runGeodesics(s, outDir);

  const DomainGrid grid = buildDiscGrid(s.gridN);
  const ConformalMetric sigma = s.sigmaMetric();
  const ConformalMetric rho = s.rhoMetric();
  const BoundaryData data = s.boundaryData();

  Json j;
  j["scenario"] = s.name;
  j["run"] = runName(s.run);
  j["grid_n"] = s.gridN;
  j["p"] = s.p;

  int exitCode = 0;
  switch (s.run) {
    case Scenario::Run::Solve: {
      const EnergyParams params{s.p, s.firstEps()};
      const SolveResult r = solveDirichlet(grid, sigma, rho, params, data);
      j["eps"] = s.firstEps();
      j["result"] = solveJson(r);
      const DerivedFields d = deriveFields(r.field, params, sigma, rho);
      dumpFieldsCsv(r.field, &d, outDir + "/fields.csv");
      exitCode = r.converged ? 0 : 1;
      break;
    }
    case Scenario::Run::Certify: {
      const EnergyParams params{s.p, s.firstEps()};
      const SolveResult r = solveDirichlet(grid, sigma, rho, params, data);
      j["eps"] = s.firstEps();
      j["result"] = solveJson(r);
      const CertificateReport rep =
          certifyField(r.field, params, sigma, rho, s.gauge());
      j["certificate"] = certificateJson(rep);
      const DerivedFields d = deriveFields(r.field, params, sigma, rho);
      dumpFieldsCsv(r.field, &d, outDir + "/fields.csv");
      exitCode = (r.converged && rep.passed) ? 0 : 1;
      break;
    }
    case Scenario::Run::Homotopy: {
      const auto curve = s.targetCurve();
      const double L = curve->length();
      const BoundaryLoop start =
          makeLoop(curve, [L](double) { return L / (2.0 * M_PI); });
      const BoundaryLoop end = makeLoop(curve, s.boundarySpeed());
      ContinuationConfig cc;
      cc.steps = s.homotopySteps;
      cc.exponentOnly = s.exponentOnly;
      cc.seed = s.seed;
      try {
        const auto states = continuationRun(grid, sigma, rho, s.p, s.firstEps(),
                                            start, end, cc);
        std::ofstream trace(outDir + "/trace.jsonl");
        trace.precision(17);
        for (const auto& st : states) {
          Json rec;
          rec["t"] = st.t;
          rec["p_t"] = st.pt;
          rec["energy"] = st.solution.finalEnergy;
          rec["minInteriorJ"] = st.minInteriorJ;
          rec["minBoundaryJ"] = st.minBoundaryJ;
          rec["iterations"] = st.solution.iterations;
          trace << rec.dump() << "\n";
        }
        const UniformBoundsReport ub = uniformBoundsReport(states);
        j["states"] = states.size();
        j["uniform_bounds"] = {{"sup_holder_u", ub.supHolderU},
                               {"sup_holder_du", ub.supHolderDu},
                               {"min_boundary_jacobian", ub.minBoundaryJ},
                               {"min_interior_jacobian", ub.minInteriorJ}};
        const DerivedFields d = deriveFields(
            states.back().solution.field,
            EnergyParams{states.back().pt, s.firstEps()}, sigma, rho);
        dumpFieldsCsv(states.back().solution.field, &d, outDir + "/fields.csv");
      } catch (const ContinuationFailure& f) {
        j["failure"] = {{"t", f.t}, {"message", f.what()}};
        exitCode = 1;
      }
      break;
    }
    case Scenario::Run::Sweep: {
      const SweepReport rep = epsilonSweep(grid, sigma, rho, s.p, data,
                                           s.epsList, SolveConfig{}, s.jobs);
      Json entries = Json::array();
      for (const auto& e : rep.entries) {
        entries.push_back({{"eps", e.eps},
                           {"converged", e.converged},
                           {"energy", e.energy},
                           {"iterations", e.iterations},
                           {"lp_dist", e.lpDist},
                           {"sup_jv_diff", e.supJVdiff},
                           {"sup_jv_diff_metric", e.supJVdiffMetric},
                           {"w12_lhs", e.lem95lhs},
                           {"w12_rhs", e.lem95rhs},
                           {"caccioppoli_ratio", e.cacRatio}});
      }
      j["entries"] = entries;
      j["noise_floor"] = rep.noiseFloor;
      j["distances_monotone"] = rep.distancesMonotone;
      j["jv_monotone"] = rep.jvMonotone;
      j["final_dist"] = rep.finalDist;
      j["all_converged"] = rep.allConverged;
      exitCode = rep.allConverged ? 0 : 1;
      break;
    }
    default:
      break;
  }

  std::ofstream out(outDir + "/report.json");
  out << j.dump(2) << "\n";
  return exitCode;
}

}  // namespace phsurf
