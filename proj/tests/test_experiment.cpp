#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "m2msim/errors.hpp"
#include "m2msim/experiment.hpp"

using namespace m2m;
namespace fs = std::filesystem;

namespace {

fs::path FreshDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("m2msim_test_" + name);
  fs::remove_all(dir);
  return dir;
}

RunManifest Tiny(Experiment e, const fs::path& dir) {
  RunManifest m;
  m.experiment = e;
  m.outputDir = dir;
  m.overrides = {"layout.num_sites=1", "num_drops=2"};
  m.workers = 2;
  return m;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("experiment names") {
  for (Experiment e : {Experiment::LAMBDA_SWEEP, Experiment::WITH_WITHOUT_M2M, Experiment::GRAPH_VS_REUSE,
                       Experiment::CUSTOM}) {
    CHECK(ParseExperiment(ToString(e)) == e);
  }
  CHECK_FALSE(ParseExperiment("NOPE").has_value());
}

TEST_CASE("experiment variants") {
  std::vector<std::string> names;
  const auto sweep = ExperimentConfigs(DropConfig{}, Experiment::LAMBDA_SWEEP, &names);
  REQUIRE(sweep.size() == 11);
  CHECK(names.front() == "lambda_0.0");
  CHECK(names.back() == "lambda_1.0");
  CHECK(sweep[6].lambda == doctest::Approx(0.6));
  for (const DropConfig& c : sweep) {
    CHECK(c.seed == DropConfig{}.seed);
  }
  const auto ww = ExperimentConfigs(DropConfig{}, Experiment::WITH_WITHOUT_M2M, &names);
  CHECK(names == std::vector<std::string>{"with_m2m", "without_m2m"});
  CHECK(ww[1].population.outdoorMtcdsPerSector == 0);
  CHECK(ww[1].population.uesPerSector == ww[0].population.uesPerSector);
  const auto gr = ExperimentConfigs(DropConfig{}, Experiment::GRAPH_VS_REUSE, &names);
  CHECK(gr[1].allocationMode == AllocationMode::FULL_REUSE);
}

TEST_CASE("custom run writes a valid directory") {
  const fs::path dir = FreshDir("custom");
  RunManifest m = Tiny(Experiment::CUSTOM, dir);
  m.verbosity = 2;
  const auto campaigns = RunExperiment(m);
  REQUIRE(campaigns.size() == 1);
  for (const char* f : {"manifest.json", "config.json", "samples.csv", "cdf_custom.csv", "summary.txt", "roster.csv",
                        "graph.txt", "coloring_trace.csv", "allocation.csv", "links.csv"}) {
    CHECK_MESSAGE(fs::exists(dir / f), f);
  }
  CHECK_NOTHROW(ValidateOutputDir(dir, campaigns[0].config));
  fs::remove_all(dir);
}

TEST_CASE("graph versus reuse names a winner") {
  const fs::path dir = FreshDir("gvr");
  const auto campaigns = RunExperiment(Tiny(Experiment::GRAPH_VS_REUSE, dir));
  CHECK(fs::exists(dir / "cdf_graph_based.csv"));
  CHECK(fs::exists(dir / "cdf_full_reuse.csv"));
  CHECK(Slurp(dir / "summary.txt").find("pair_p10_winner=") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("with and without M2M reports the sign") {
  const fs::path dir = FreshDir("ww");
  const auto campaigns = RunExperiment(Tiny(Experiment::WITH_WITHOUT_M2M, dir));
  const std::string summary = Slurp(dir / "summary.txt");
  CHECK(summary.find("aggregate_difference_sign=") != std::string::npos);
  CHECK_FALSE(campaigns[1].report.Has(Population::M2M));
  fs::remove_all(dir);
}

TEST_CASE("seed in the manifest wins") {
  const fs::path dir = FreshDir("seed");
  RunManifest m = Tiny(Experiment::CUSTOM, dir);
  m.seed = 99;
  CHECK(RunExperiment(m)[0].config.seed == 99);
  fs::remove_all(dir);
}

TEST_CASE("a failing run leaves no partial output") {
  const fs::path dir = FreshDir("fail");
  fs::create_directories(dir / "samples.csv");
  RunManifest m = Tiny(Experiment::CUSTOM, dir);
  CHECK_THROWS(RunExperiment(m));
  CHECK_FALSE(fs::exists(dir / "manifest.json"));
  CHECK_FALSE(fs::exists(dir / "config.json"));
  fs::remove_all(dir);

  const fs::path fresh = FreshDir("badcfg");
  RunManifest bad = Tiny(Experiment::CUSTOM, fresh);
  bad.overrides.push_back("lambda=2");
  CHECK_THROWS_AS(RunExperiment(bad), ConfigError);
  CHECK_FALSE(fs::exists(fresh));
}
