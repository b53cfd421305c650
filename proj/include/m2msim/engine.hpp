#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string_view>
#include <vector>

#include "m2msim/channel.hpp"
#include "m2msim/graphalloc.hpp"
#include "m2msim/metrics.hpp"
#include "m2msim/resource_grid.hpp"
#include "m2msim/topology.hpp"
#include "m2msim/utility.hpp"

namespace m2m {

struct LayoutConfig {
  int numSites = 19;
  double isd = 500.0;
  bool wraparound = false;
  BlockPlacement blocks;
  double minDistanceM = 35.0;
  /// Re-attach outdoor UEs and MTCDs to the strongest sector once shadowing
  /// is drawn; false keeps the pathloss + antenna attachment from placement.
  bool shadowedAttachment = true;

  friend bool operator==(const LayoutConfig&, const LayoutConfig&) = default;
};

struct PopulationConfig {
  int uesPerSector = 5;
  int outdoorMtcdsPerSector = 50;
  int indoorPairsPerBlock = 50;
  int mtcgsPerSector = 1;
  double duty = 0.1;
  /// Rate each active indoor MTCD asks of its gateway.
  double gatewayDemandBps = 64e3;

  friend bool operator==(const PopulationConfig&, const PopulationConfig&) = default;
};

struct RadioConfig {
  double enbMaxTxPowerDbm = 46.0;
  double enbAntennaGainDbi = 14.0;
  double mtcdMaxTxPowerDbm = 14.0;
  double mtcgMaxTxPowerDbm = 14.0;
  double terminalAntennaGainDbi = 0.0;  // UE, MTCD and MTCG
  double shadowingSigmaDb = 8.0;
  double interSiteCorrelation = 0.5;
  ChannelConfig channel;

  friend bool operator==(const RadioConfig&, const RadioConfig&) = default;
};

struct UtilityConfig {
  UtilitySpec ue = UtilitySpec::Elastic(0.3e6, 6e6);
  UtilitySpec mtcd = UtilitySpec::RateAdaptive(64e3, 4.0);
  /// Device-to-device pairs, evaluated on the mean rate per held RB.
  UtilitySpec pair = UtilitySpec::RateAdaptive(64e3, 4.0);

  friend bool operator==(const UtilityConfig&, const UtilityConfig&) = default;
};

struct GraphConfig {
  double thresholdDb = 30.0;
  double p0 = 0.1;
  std::size_t iterations = 50;
  double moveProbability = 0.8;
  std::size_t numColors = 0;  // 0: access-slot RBs not reserved for gateways

  friend bool operator==(const GraphConfig&, const GraphConfig&) = default;
};

enum class AllocationMode { GRAPH_BASED, FULL_REUSE };

std::string_view ToString(AllocationMode mode);

struct DropConfig {
  LayoutConfig layout;
  PopulationConfig population;
  RadioConfig radio;
  UtilityConfig utility;
  GraphConfig graph;
  double lambda = 0.8;
  std::size_t numDrops = 100;
  std::uint64_t seed = 1;
  AllocationMode allocationMode = AllocationMode::GRAPH_BASED;

  /// Throws ConfigError naming the offending field.
  void Validate() const;

  friend bool operator==(const DropConfig&, const DropConfig&) = default;
};

enum class Population { H2H, M2M, PAIR, GATEWAY };

std::string_view ToString(Population p);

struct UtilitySample {
  Population population = Population::H2H;
  NodeId node = 0;
  double rateBps = 0.0;
  double utility = 0.0;
};

struct DropResult {
  std::size_t dropIndex = 0;
  std::vector<UtilitySample> samples;      // statistics region only
  std::vector<double> sectorObjectives;    // aggregate-utility objective per region sector
  double objective = 0.0;                  // mean of sectorObjectives
  std::size_t reservedBackhaulRbs = 0;
  std::size_t backhaulOverlaps = 0;
  std::size_t sectorCollisions = 0;
  std::size_t activePairs = 0;
  std::size_t numColors = 0;
  ConflictCount pairConflicts;
};

/// Internals of one drop, filled on request for dumps.
struct DropDebug {
  std::vector<Node> roster;
  ResourceGrid grid{0, 0};
  InterferenceGraph graph;
  ColoringState coloring;
  std::vector<RoundTrace> coloringTrace;
  std::vector<Transmission> links;
};

/// Seed of drop k, derived from the master seed by counter.
std::uint64_t DropSeed(std::uint64_t masterSeed, std::uint64_t dropIndex);

/// Whether statistics are collected from `sector`: every sector with
/// wraparound, the central site only without.
bool InStatisticsRegion(const DropConfig& config, std::size_t sector);

/**
 * One snapshot: placement, duty cycling, shadowing, gateway backhaul
 * reservation, per-sector backhaul + access scheduling on full-load SINR
 * estimates, pair channel assignment, then SINR -> rate -> utility under the
 * committed allocation.
 */
DropResult RunDrop(const DropConfig& config, std::size_t dropIndex, DropDebug* debug = nullptr);

struct MetricsReport {
  std::vector<DropResult> drops;
  std::vector<double> dropObjectives;
  double aggregateCellUtility = 0.0;
  std::size_t backhaulOverlaps = 0;
  std::size_t sectorCollisions = 0;

  /// Utilities of one population across all drops, in drop order.
  std::vector<double> Utilities(Population p) const;
  bool Has(Population p) const { return !Utilities(p).empty(); }
  CdfTable Cdf(Population p) const { return CdfTable(Utilities(p)); }
  PercentileSummary Summary(Population p) const { return Summarize(Cdf(p)); }
};

MetricsReport BuildReport(std::vector<DropResult> drops);

/// Drops spread over `workers` OpenMP threads; identical to the serial run.
MetricsReport RunCampaign(const DropConfig& config, int workers);
MetricsReport RunCampaignSerial(const DropConfig& config);

/// Tags attached to every output row.
struct RunTag {
  std::string_view experiment;
  double lambda = 0.0;
  AllocationMode mode = AllocationMode::GRAPH_BASED;
  std::string_view variant = "default";
};

/// experiment,variant,lambda,mode,drop,population,node,rate_bps,utility
void WriteSamplesCsv(std::ostream& out, const MetricsReport& report, const RunTag& tag, bool header);
/// experiment,variant,lambda,mode,population,value,cdf
void WriteCdfCsv(std::ostream& out, const MetricsReport& report, const RunTag& tag, bool header);
/// key=value lines, every key prefixed with `prefix`.
void WriteSummary(std::ostream& out, const MetricsReport& report, std::string_view prefix);

}  // namespace m2m
