#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "m2msim/engine.hpp"

namespace m2m {

enum class Experiment { LAMBDA_SWEEP, WITH_WITHOUT_M2M, GRAPH_VS_REUSE, CUSTOM };

std::string_view ToString(Experiment e);
std::optional<Experiment> ParseExperiment(std::string_view name);

struct RunManifest {
  std::filesystem::path configPath;  // empty: built-in defaults
  Experiment experiment = Experiment::CUSTOM;
  std::filesystem::path outputDir;
  std::optional<std::uint64_t> seed;  // overrides the config seed when set
  std::vector<std::string> overrides;
  int workers = 1;
  int verbosity = 0;
};

struct Campaign {
  std::string variant;
  DropConfig config;
  MetricsReport report;
};

/// Paired-seed campaigns of one experiment, in output order.
std::vector<DropConfig> ExperimentConfigs(const DropConfig& base, Experiment experiment,
                                          std::vector<std::string>* variants = nullptr);

/// Same population, no MTCDs, pairs or gateways.
DropConfig WithoutM2m(DropConfig config);

std::vector<Campaign> RunCampaigns(const DropConfig& base, Experiment experiment, int workers);

/// Experiment-level verdict lines (key=value) appended to the summary.
std::string ExperimentVerdict(Experiment experiment, const std::vector<Campaign>& campaigns);

/**
 * Runs the experiment and fills manifest.outputDir with manifest.json,
 * config.json, samples.csv, one cdf_<variant>.csv per campaign, summary.txt
 * and, with verbosity >= 1, dumps of the first drop. Files written by a
 * failing run are removed before the error propagates.
 */
std::vector<Campaign> RunExperiment(const RunManifest& manifest);

/// Checks headers and column counts of the files RunExperiment writes and
/// that config.json re-parses to `config`. Throws ContractViolation.
void ValidateOutputDir(const std::filesystem::path& dir, const DropConfig& config);

}  // namespace m2m
