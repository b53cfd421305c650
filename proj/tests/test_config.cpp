#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "m2msim/config.hpp"
#include "m2msim/errors.hpp"

using namespace m2m;

TEST_CASE("defaults follow the evaluation parameters") {
  const DropConfig c = ParseConfigText("{}");
  CHECK(c.layout.numSites == 19);
  CHECK(c.layout.isd == 500.0);
  CHECK(c.population.uesPerSector == 5);
  CHECK(c.population.outdoorMtcdsPerSector == 50);
  CHECK(c.population.indoorPairsPerBlock == 50);
  CHECK(c.population.duty == 0.1);
  CHECK(c.radio.shadowingSigmaDb == 8.0);
  CHECK(c.radio.interSiteCorrelation == 0.5);
  CHECK(c.radio.enbMaxTxPowerDbm == 46.0);
  CHECK(c.radio.enbAntennaGainDbi == 14.0);
  CHECK(c.radio.mtcdMaxTxPowerDbm == 14.0);
  CHECK(c.radio.terminalAntennaGainDbi == 0.0);
  CHECK(c.radio.channel.link.noiseFigureDb == 9.0);
  CHECK(c.layout.blocks.apartmentSize == 10.0);
  CHECK(c.lambda == 0.8);
  CHECK(c.utility.ue.appClass == AppClass::ELASTIC);
  CHECK(c == DropConfig{});
}

TEST_CASE("shipped default config") {
  const DropConfig c = ParseConfig(M2MSIM_CONFIG_DIR "/default.json");
  CHECK(c == DropConfig{});
  CHECK(c.layout.isd == 500.0);
  CHECK(c.radio.enbMaxTxPowerDbm == 46.0);
  CHECK(c.radio.shadowingSigmaDb == 8.0);
  CHECK(c.radio.channel.link.noiseFigureDb == 9.0);
  const std::vector<std::string> o = {"lambda=0.8"};
  CHECK(ParseConfig(M2MSIM_CONFIG_DIR "/default.json", o).lambda == 0.8);
}

TEST_CASE("overrides") {
  const std::vector<std::string> o = {"lambda=0.3", "layout.num_sites=7", "utility.mtcd.class=HARD_REAL_TIME",
                                      "allocation_mode=FULL_REUSE"};
  const DropConfig c = ParseConfigText("{\"lambda\": 0.9}", o);
  CHECK(c.lambda == 0.3);
  CHECK(c.layout.numSites == 7);
  CHECK(c.utility.mtcd.appClass == AppClass::HARD_REAL_TIME);
  CHECK(c.allocationMode == AllocationMode::FULL_REUSE);
  CHECK_THROWS_AS(ParseConfigText("{}", std::vector<std::string>{"lambda"}), ConfigError);
}

TEST_CASE("out of range lambda is rejected") {
  CHECK_THROWS_WITH_AS(ParseConfigText("{\"lambda\": 1.5}"), doctest::Contains("lambda"), ConfigError);
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_WITH_AS(ParseConfigText("{\"radio\": {\"foo\": 1}}"), doctest::Contains("radio.foo"), ConfigError);
  CHECK_THROWS_AS(ParseConfigText("{\"bogus\": true}"), ConfigError);
}

TEST_CASE("type errors name the key") {
  CHECK_THROWS_WITH_AS(ParseConfigText("{\"layout\": {\"wraparound\": 1}}"), doctest::Contains("layout.wraparound"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(ParseConfigText("{\"num_drops\": -3}"), doctest::Contains("num_drops"), ConfigError);
  CHECK_THROWS_WITH_AS(ParseConfigText("{\"population\": {\"ues_per_sector\": 2.5}}"),
                       doctest::Contains("population.ues_per_sector"), ConfigError);
  CHECK_THROWS_AS(ParseConfigText("{\"lambda\": \"high\"}"), ConfigError);
  CHECK_THROWS_AS(ParseConfigText("{\"utility\": {\"ue\": {\"class\": \"CLASS_9\"}}}"), ConfigError);
}

TEST_CASE("syntax errors carry line and column") {
  CHECK_THROWS_WITH_AS(ParseConfigText("{\n  \"lambda\": 0.5,\n  oops\n}", {}, "cfg.json"),
                       doctest::Contains("cfg.json:3:"), ConfigError);
}

TEST_CASE("json round trip") {
  DropConfig c;
  c.lambda = 0.25;
  c.layout.numSites = 7;
  c.layout.wraparound = true;
  c.radio.channel.link.numRbs = 25;
  c.utility.pair = UtilitySpec::DelayAdaptive(1e5, 15.0);
  c.graph.numColors = 10;
  c.seed = 123456789012345ULL;
  CHECK(ConfigFromJson(ConfigToJson(c)) == c);
  CHECK(ParseConfigText(ConfigToJson(c).dump(2)) == c);
}

TEST_CASE("files and missing files") {
  const auto path = std::filesystem::temp_directory_path() / "m2msim_test_config.json";
  {
    std::ofstream out(path);
    out << "{\"num_drops\": 3}";
  }
  CHECK(ParseConfig(path).numDrops == 3);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(ParseConfig(path), ConfigError);
  CHECK(ParseConfig("") == DropConfig{});
}

TEST_CASE("apply override on a tree") {
  nlohmann::ordered_json tree = nlohmann::ordered_json::object();
  ApplyOverride(tree, "graph.p0=0.25");
  ApplyOverride(tree, "allocation_mode=GRAPH_BASED");
  CHECK(tree["graph"]["p0"] == 0.25);
  CHECK(tree["allocation_mode"] == "GRAPH_BASED");
  CHECK_THROWS_AS(ApplyOverride(tree, "graph..p0=1"), ConfigError);
  ApplyOverride(tree, "lambda=0.5");
  CHECK_THROWS_AS(ApplyOverride(tree, "lambda.x=1"), ConfigError);
}
