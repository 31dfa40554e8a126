#include <CLI11.hpp>
#include <iostream>

#include "phsurf/scenario.hpp"

namespace {

struct CommonOpts {
  std::string scenarioName;
  std::string configPath;
  std::string outDir;
  int gridN = 0;
  int jobs = 0;
};

void addCommon(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("scenario", o.scenarioName, "bundled scenario name");
  cmd->add_option("--config", o.configPath, "scenario config file");
  cmd->add_option("--out", o.outDir, "output directory");
  cmd->add_option("--grid-n", o.gridN, "grid resolution override");
  cmd->add_option("--jobs", o.jobs, "parallel jobs for sweeps");
}

phsurf::Scenario resolve(const CommonOpts& o) {
  phsurf::Scenario s;
  if (!o.configPath.empty())
    s = phsurf::Scenario::parseFile(o.configPath);
  else if (!o.scenarioName.empty())
    s = phsurf::bundledScenario(o.scenarioName);
  else
    throw std::invalid_argument("provide a scenario name or --config");
  if (o.gridN > 0) s.gridN = o.gridN;
  if (o.jobs > 0) s.jobs = o.jobs;
  return s;
}

int runWithKind(const CommonOpts& o, phsurf::Scenario::Run kind) {
  phsurf::Scenario s = resolve(o);
  s.run = kind;
  s.validate();
  const std::string out = o.outDir.empty() ? "out/" + s.name : o.outDir;
  const int code = phsurf::runScenario(s, out);
  std::cout << (code == 0 ? "ok" : "FAILED") << ": " << s.name << " -> " << out
            << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-harmonic maps between conformal surfaces on the disc"};
  app.require_subcommand(1);

  CommonOpts solveO, homO, certO, sweepO, geoO;
  auto* cmdList = app.add_subcommand("list", "list bundled scenarios");
  auto* cmdDescribe =
      app.add_subcommand("describe", "print the resolved scenario config");
  CommonOpts descO;
  addCommon(cmdDescribe, descO);

  addCommon(app.add_subcommand("solve", "Dirichlet solve"), solveO);
  addCommon(app.add_subcommand("homotopy", "continuation run"), homO);
  addCommon(app.add_subcommand("certify", "certification suite"), certO);
  addCommon(app.add_subcommand("sweep-eps", "eps -> 0 convergence sweep"), sweepO);
  addCommon(app.add_subcommand("geodesics", "geodesic geometry battery"), geoO);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmdList->parsed()) {
      for (const auto& n : phsurf::listScenarios()) std::cout << n << "\n";
      return 0;
    }
    if (cmdDescribe->parsed()) {
      std::cout << resolve(descO).serialize();
      return 0;
    }
    if (app.get_subcommand("solve")->parsed())
      return runWithKind(solveO, phsurf::Scenario::Run::Solve);
    if (app.get_subcommand("homotopy")->parsed())
      return runWithKind(homO, phsurf::Scenario::Run::Homotopy);
    if (app.get_subcommand("certify")->parsed())
      return runWithKind(certO, phsurf::Scenario::Run::Certify);
    if (app.get_subcommand("sweep-eps")->parsed())
      return runWithKind(sweepO, phsurf::Scenario::Run::Sweep);
    if (app.get_subcommand("geodesics")->parsed())
      return runWithKind(geoO, phsurf::Scenario::Run::Geodesics);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
