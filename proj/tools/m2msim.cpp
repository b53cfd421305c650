// Command-line front end for the M2M/H2H system-level simulator.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "m2msim/config.hpp"
#include "m2msim/errors.hpp"
#include "m2msim/experiment.hpp"
#include "m2msim/utility.hpp"

namespace {

int RunCommand(const m2m::RunManifest& manifest) {
  const auto campaigns = m2m::RunExperiment(manifest);
  std::cout << "experiment=" << m2m::ToString(manifest.experiment) << '\n';
  for (const auto& c : campaigns) {
    std::cout << c.variant << ".aggregate_cell_utility=" << c.report.aggregateCellUtility << '\n';
  }
  std::cout << m2m::ExperimentVerdict(manifest.experiment, campaigns);
  std::cout << "output=" << manifest.outputDir.string() << '\n';
  return 0;
}

int UtilitySweep(const std::string& className, double midpoint, double shape, double r0, double rMax,
                 double threshold, double maxRate, int steps) {
  const auto appClass = m2m::ParseAppClass(className);
  if (!appClass) {
    throw m2m::ConfigError("unknown application class " + className);
  }
  m2m::UtilitySpec spec;
  spec.appClass = *appClass;
  spec.midpoint = midpoint;
  spec.shape = shape;
  spec.r0 = r0;
  spec.rMax = rMax;
  spec.threshold = threshold;
  spec.Validate();
  std::cout << "rate_bps,utility\n";
  for (int k = 0; k <= steps; ++k) {
    const double rate = maxRate * k / steps;
    std::cout << rate << ',' << m2m::EvalUtility(spec, rate) << '\n';
  }
  return 0;
}

int Layout(const std::string& configPath, const std::vector<std::string>& overrides, std::uint64_t drop,
           const std::string& outPath) {
  const m2m::DropConfig config = m2m::ParseConfig(configPath, overrides);
  m2m::DropDebug debug;
  m2m::RunDrop(config, drop, &debug);
  if (outPath.empty() || outPath == "-") {
    m2m::WriteRoster(std::cout, debug.roster);
  } else {
    std::ofstream out(outPath);
    if (!out) {
      throw m2m::ConfigError("cannot write " + outPath);
    }
    m2m::WriteRoster(out, debug.roster);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"System-level simulator for joint H2H/M2M resource allocation"};
  app.require_subcommand(1);

  m2m::RunManifest manifest;
  std::string experiment = "CUSTOM";
  std::string configPath;
  std::string outDir;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "run an experiment and write its output directory");
  run->add_option("-c,--config", configPath, "JSON config file (defaults when omitted)")->check(CLI::ExistingFile);
  run->add_option("-e,--experiment", experiment, "LAMBDA_SWEEP, WITH_WITHOUT_M2M, GRAPH_VS_REUSE or CUSTOM")
      ->check(CLI::IsMember({"LAMBDA_SWEEP", "WITH_WITHOUT_M2M", "GRAPH_VS_REUSE", "CUSTOM"}));
  run->add_option("-o,--out", outDir, "output directory")->required();
  auto* seedOpt = run->add_option("-s,--seed", seed, "master seed");
  run->add_option("-j,--workers", manifest.workers, "parallel drops")->check(CLI::PositiveNumber);
  run->add_option("-v,--verbosity", manifest.verbosity, "0: results, 1: + roster/graph/colouring, 2: + grid/links")
      ->check(CLI::Range(0, 2));
  run->add_option("overrides", overrides, "key=value config overrides, e.g. lambda=0.8 layout.num_sites=7");

  std::string className = "RATE_ADAPTIVE";
  double midpoint = 0.3e6, shape = 4.0, r0 = 0.3e6, rMax = 6e6, threshold = 1e6, maxRate = 2e6;
  int steps = 40;
  auto* sweep = app.add_subcommand("utility-sweep", "tabulate a utility function");
  sweep->add_option("--class", className, "ELASTIC, HARD_REAL_TIME, DELAY_ADAPTIVE or RATE_ADAPTIVE");
  sweep->add_option("--midpoint", midpoint, "sigmoid midpoint (bit/s)");
  sweep->add_option("--shape", shape, "sigmoid shape");
  sweep->add_option("--r0", r0, "elastic scale (bit/s)");
  sweep->add_option("--r-max", rMax, "elastic saturation rate (bit/s)");
  sweep->add_option("--threshold", threshold, "hard real-time threshold (bit/s)");
  sweep->add_option("--max-rate", maxRate, "largest tabulated rate (bit/s)");
  sweep->add_option("--steps", steps, "table intervals")->check(CLI::PositiveNumber);

  std::string layoutConfig;
  std::vector<std::string> layoutOverrides;
  std::uint64_t layoutDrop = 0;
  std::string layoutOut;
  auto* layout = app.add_subcommand("layout", "export the node roster of one drop as CSV");
  layout->add_option("-c,--config", layoutConfig, "JSON config file")->check(CLI::ExistingFile);
  layout->add_option("-d,--drop", layoutDrop, "drop index");
  layout->add_option("-o,--out", layoutOut, "CSV path, '-' for stdout");
  layout->add_option("overrides", layoutOverrides, "key=value config overrides");

  std::string showConfig;
  std::vector<std::string> showOverrides;
  auto* config = app.add_subcommand("config", "print the effective configuration as JSON");
  config->add_option("-c,--config", showConfig, "JSON config file")->check(CLI::ExistingFile);
  config->add_option("overrides", showOverrides, "key=value config overrides");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      manifest.configPath = configPath;
      manifest.experiment = *m2m::ParseExperiment(experiment);
      manifest.outputDir = outDir;
      if (*seedOpt) {
        manifest.seed = seed;
      }
      manifest.overrides = overrides;
      return RunCommand(manifest);
    }
    if (*sweep) {
      return UtilitySweep(className, midpoint, shape, r0, rMax, threshold, maxRate, steps);
    }
    if (*config) {
      std::cout << m2m::ConfigToJson(m2m::ParseConfig(showConfig, showOverrides)).dump(2) << '\n';
      return 0;
    }
    if (*layout) {
      return Layout(layoutConfig, layoutOverrides, layoutDrop, layoutOut);
    }
  } catch (const std::exception& e) {
    std::cerr << "m2msim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
