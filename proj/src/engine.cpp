#include "m2msim/engine.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <exception>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

#include "m2msim/errors.hpp"
#include "m2msim/rng.hpp"
#include "m2msim/scheduler.hpp"

namespace m2m {

std::string_view ToString(AllocationMode mode) {
  return mode == AllocationMode::GRAPH_BASED ? "GRAPH_BASED" : "FULL_REUSE";
}

std::string_view ToString(Population p) {
  switch (p) {
    case Population::H2H:
      return "h2h";
    case Population::M2M:
      return "m2m";
    case Population::PAIR:
      return "pair";
    case Population::GATEWAY:
      return "gateway";
  }
  return "?";
}

namespace {

void Require(bool ok, const std::string& what) {
  if (!ok) {
    throw ConfigError("invalid configuration: " + what);
  }
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Direct eNB links of one sector together with their scheduling outcome.
struct SectorPlan {
  SectorLinks links;
  SlotSchedule backhaul;
  SlotSchedule access;
};

struct PairPlan {
  MtcdPair pair;
  std::vector<int> colors;
};

std::vector<Node> BuildRoster(const DropConfig& config, const NetworkLayout& layout, std::uint64_t seed) {
  const RadioConfig& radio = config.radio;
  const PopulationConfig& pop = config.population;
  PlacementOptions options;
  options.antenna = radio.channel.antenna;
  options.antenna.peakGainDbi = radio.enbAntennaGainDbi;
  options.minDistanceM = config.layout.minDistanceM;

  std::vector<Node> roster = MakeSectorNodes(layout, radio.enbMaxTxPowerDbm, radio.enbAntennaGainDbi);
  auto append = [&roster, &radio](std::vector<Node> nodes, double txPower) {
    for (Node& n : nodes) {
      n.maxTxPowerDbm = txPower;
      n.antennaGainDbi = radio.terminalAntennaGainDbi;
      roster.push_back(n);
    }
  };
  Rng ueRng = MakeRng(seed, Stream::kUePlacement);
  append(PlaceUes(layout, pop.uesPerSector, ueRng, static_cast<NodeId>(roster.size()), options), 23.0);
  Rng mtcdRng = MakeRng(seed, Stream::kMtcdPlacement);
  append(PlaceMtcds(layout, pop.outdoorMtcdsPerSector, pop.indoorPairsPerBlock, mtcdRng,
                    static_cast<NodeId>(roster.size()), options),
         radio.mtcdMaxTxPowerDbm);
  Rng mtcgRng = MakeRng(seed, Stream::kMtcgPlacement);
  append(PlaceMtcgs(layout, pop.mtcgsPerSector, mtcgRng, static_cast<NodeId>(roster.size())), radio.mtcgMaxTxPowerDbm);

  Rng dutyRng = MakeRng(seed, Stream::kDutyCycle);
  return ApplyDutyCycle(roster, pop.duty, dutyRng);
}

}  // namespace

void DropConfig::Validate() const {
  Require(layout.numSites == 1 || layout.numSites == 7 || layout.numSites == 19, "layout.num_sites must be 1, 7 or 19");
  Require(layout.isd > 0.0, "layout.isd must be > 0");
  Require(layout.minDistanceM >= 0.0 && layout.minDistanceM < layout.isd / 1.7320508,
          "layout.min_distance_m must lie in [0, cell radius)");
  Require(layout.blocks.apartmentSize > 0.0, "layout.apartment_size_m must be > 0");
  Require(layout.blocks.stripeSeparation >= 0.0, "layout.stripe_separation_m must be >= 0");
  Require(population.uesPerSector >= 0, "population.ues_per_sector must be >= 0");
  Require(population.outdoorMtcdsPerSector >= 0, "population.outdoor_mtcds_per_sector must be >= 0");
  Require(population.indoorPairsPerBlock >= 0 && population.indoorPairsPerBlock <= 80,
          "population.indoor_pairs_per_block must lie in [0, 80]");
  Require(population.mtcgsPerSector >= 0, "population.mtcgs_per_sector must be >= 0");
  Require(population.duty >= 0.0 && population.duty <= 1.0, "population.duty must lie in [0, 1]");
  Require(population.gatewayDemandBps >= 0.0, "population.gateway_demand_bps must be >= 0");
  Require(radio.shadowingSigmaDb >= 0.0, "radio.shadowing_sigma_db must be >= 0");
  Require(radio.interSiteCorrelation >= 0.0 && radio.interSiteCorrelation <= 1.0,
          "radio.inter_site_correlation must lie in [0, 1]");
  Require(radio.channel.link.numRbs >= 1, "radio.num_rbs must be >= 1");
  Require(radio.channel.link.rbBandwidthHz > 0.0, "radio.rb_bandwidth_hz must be > 0");
  Require(radio.channel.antenna.beamwidthDeg > 0.0, "radio.beamwidth_deg must be > 0");
  Require(radio.channel.macroMinDistanceM > 0.0, "radio.macro_min_distance_m must be > 0");
  Require(radio.channel.deviceMinDistanceM > 0.0, "radio.device_min_distance_m must be > 0");
  Require(radio.channel.link.rateAttenuation > 0.0, "radio.rate_attenuation must be > 0");
  Require(radio.channel.link.maxSpectralEfficiency > 0.0, "radio.max_spectral_efficiency must be > 0");
  Require(graph.p0 >= 0.0 && graph.p0 <= 1.0, "graph.p0 must lie in [0, 1]");
  Require(graph.iterations >= 1, "graph.iterations must be >= 1");
  Require(graph.moveProbability > 0.0 && graph.moveProbability <= 1.0, "graph.move_probability must lie in (0, 1]");
  Require(graph.numColors <= radio.channel.link.numRbs, "graph.num_colors must not exceed radio.num_rbs");
  Require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
  Require(numDrops >= 1, "num_drops must be >= 1");
  utility.ue.Validate();
  utility.mtcd.Validate();
  utility.pair.Validate();
}

std::uint64_t DropSeed(std::uint64_t masterSeed, std::uint64_t dropIndex) {
  return DeriveSeed(masterSeed, 0xD20Full, dropIndex);
}

bool InStatisticsRegion(const DropConfig& config, std::size_t sector) {
  return config.layout.wraparound || NetworkLayout::SiteOfSector(static_cast<int>(sector)) == 0;
}

DropResult RunDrop(const DropConfig& config, std::size_t dropIndex, DropDebug* debug) {
  config.Validate();
  const std::uint64_t seed = DropSeed(config.seed, dropIndex);
  const NetworkLayout layout =
      BuildLayout(config.layout.numSites, config.layout.isd, config.layout.wraparound, config.layout.blocks);
  std::vector<Node> roster = BuildRoster(config, layout, seed);

  Rng shadowRng = MakeRng(seed, Stream::kShadowing);
  ShadowingMap shadowing =
      SampleShadowing(layout, roster, config.radio.shadowingSigmaDb, config.radio.interSiteCorrelation, shadowRng);
  const ChannelState channel(layout, roster, std::move(shadowing), config.radio.channel);
  const LinkBudgetConstants& link = config.radio.channel.link;
  const std::size_t numRbs = link.numRbs;
  const std::size_t numSectors = layout.NumSectors();
  if (config.layout.shadowedAttachment) {
    for (Node& n : roster) {
      if (n.indoor || (n.kind != NodeKind::UE && n.kind != NodeKind::MTCD)) {
        continue;
      }
      std::size_t best = 0;
      for (std::size_t s = 1; s < numSectors; ++s) {
        if (channel.MacroGainDb(s, n.id) > channel.MacroGainDb(best, n.id)) {
          best = s;
        }
      }
      n.servingSector = static_cast<int>(best);
    }
  }
  const double enbPower = PowerPerRbDbm(config.radio.enbMaxTxPowerDbm, numRbs);

  // Gateways: each active indoor MTCD is relayed by an MTCG of its block's
  // site, the one on the sector whose antenna points at it best.
  std::vector<std::vector<NodeId>> mtcgsOfSector(numSectors);
  for (const Node& n : roster) {
    if (n.kind == NodeKind::MTCG) {
      mtcgsOfSector[n.servingSector].push_back(n.id);
    }
  }
  std::map<NodeId, std::vector<NodeId>> served;
  std::vector<std::size_t> servedCountOfSector(numSectors, 0);
  for (const Node& n : roster) {
    if (n.kind != NodeKind::MTCD || !n.indoor || !n.active) {
      continue;
    }
    std::size_t best = static_cast<std::size_t>(n.block) * kSectorsPerSite;
    for (int s = 1; s < kSectorsPerSite; ++s) {
      const std::size_t sector = static_cast<std::size_t>(n.block) * kSectorsPerSite + s;
      if (channel.AntennaDb(sector, n.id) > channel.AntennaDb(best, n.id)) {
        best = sector;
      }
    }
    const auto& gateways = mtcgsOfSector[best];
    if (!gateways.empty()) {
      served[gateways[servedCountOfSector[best]++ % gateways.size()]].push_back(n.id);
    }
  }

  // Sector problems on full-load SINR estimates, rates time-shared over the
  // two-slot unit.
  std::vector<SectorPlan> plans(numSectors);
  std::size_t maxReserved = 0;
  DropResult result;
  result.dropIndex = dropIndex;
  for (std::size_t s = 0; s < numSectors; ++s) {
    SectorLinks& links = plans[s].links;
    links.sectorNode = static_cast<NodeId>(s);
    links.enbPowerDbm = enbPower;
    links.lambda = config.lambda;
    std::size_t reservedInSector = 0;
    for (NodeId g : mtcgsOfSector[s]) {
      GatewayLink gateway;
      gateway.mtcg = g;
      const auto it = served.find(g);
      if (it != served.end()) {
        gateway.servedMtcds = it->second;
      }
      const double demand = config.population.gatewayDemandBps * static_cast<double>(gateway.servedMtcds.size());
      const double perRb = RatePerRb(FullLoadSinrDb(s, g, channel, enbPower), link);
      if (demand > 0.0 && perRb > 0.0) {
        gateway.reservedRbs = std::min(EstimateBackhaulRbs(demand, perRb, numRbs), numRbs - reservedInSector);
      }
      reservedInSector += gateway.reservedRbs;
      gateway.mtcgPowerDbm = PowerPerRbDbm(config.radio.mtcgMaxTxPowerDbm, gateway.reservedRbs);
      maxReserved = std::max(maxReserved, gateway.reservedRbs);
      links.gateways.push_back(gateway);
    }
    result.reservedBackhaulRbs += reservedInSector;
  }
  for (const Node& n : roster) {
    if (!n.active || n.indoor || (n.kind != NodeKind::UE && n.kind != NodeKind::MTCD)) {
      continue;
    }
    Candidate c;
    c.id = n.id;
    c.m2m = n.kind == NodeKind::MTCD;
    c.utility = c.m2m ? config.utility.mtcd : config.utility.ue;
    const double rate = RatePerRb(FullLoadSinrDb(n.servingSector, n.id, channel, enbPower), link) / 2.0;
    c.ratePerResource.assign(numRbs, rate);
    plans[n.servingSector].links.direct.push_back(std::move(c));
  }

  ResourceGrid grid(2, numRbs);
  for (SectorPlan& plan : plans) {
    std::vector<double> accumulated(plan.links.direct.size(), 0.0);
    plan.backhaul = ScheduleBackhaulSlot(plan.links, grid, 0, accumulated);
    plan.access = ScheduleAccessSlot(plan.links, grid, 1, accumulated);
  }

  // MTCD pairs share the access-slot RBs above the gateway range.
  std::vector<MtcdPair> pairs;
  for (const Node& n : roster) {
    if (n.kind == NodeKind::MTCD && n.active && n.pairPeer && n.id < *n.pairPeer) {
      pairs.push_back({n.id, *n.pairPeer});
    }
  }
  const std::size_t numColors =
      config.graph.numColors > 0 ? config.graph.numColors : std::max<std::size_t>(1, numRbs - maxReserved);
  const std::size_t colorOffset = numRbs - numColors;
  ColoringState coloring;
  InterferenceGraph graph = BuildInterferenceGraph(pairs, channel, config.graph.thresholdDb);
  if (config.allocationMode == AllocationMode::GRAPH_BASED) {
    ColoringParams params;
    params.numColors = numColors;
    params.iterations = config.graph.iterations;
    params.p0 = config.graph.p0;
    params.moveProbability = config.graph.moveProbability;
    ColoringResult colored = RunDistributedColoringSerial(graph, params, DeriveSeed(seed, static_cast<std::uint64_t>(Stream::kColoring)));
    coloring = std::move(colored.state);
    if (debug != nullptr) {
      debug->coloringTrace = std::move(colored.trace);
    }
  } else {
    coloring = FullReuseAssign(pairs.size(), numColors);
  }
  result.activePairs = pairs.size();
  result.numColors = numColors;
  result.pairConflicts = CountConflicts(graph, coloring);
  for (std::size_t v = 0; v < pairs.size(); ++v) {
    const double power = PowerPerRbDbm(config.radio.mtcdMaxTxPowerDbm, coloring.held[v].size());
    for (int color : coloring.held[v]) {
      grid.Assign(1, colorOffset + static_cast<std::size_t>(color),
                  {LinkKind::MTCD_MTCD, pairs[v].tx, pairs[v].rx, power});
    }
  }
  result.backhaulOverlaps = CountBackhaulOverlaps(grid, 0);
  result.sectorCollisions = CountSectorCollisions(grid);

  // Second pass: SINR, rate and utility under the committed allocation.
  auto rateOn = [&](std::size_t slot, std::size_t rb, const Transmission& t) {
    return RatePerRb(SinrPerRb(grid, slot, rb, t, channel), link);
  };
  std::vector<double> sectorObjective(numSectors, 0.0);
  for (std::size_t s = 0; s < numSectors; ++s) {
    if (!InStatisticsRegion(config, s)) {
      continue;
    }
    const SectorPlan& plan = plans[s];
    const auto& direct = plan.links.direct;
    std::vector<double> rates(direct.size(), 0.0);
    for (const auto& [slot, sched] : {std::pair<std::size_t, const SlotSchedule*>{0, &plan.backhaul},
                                      std::pair<std::size_t, const SlotSchedule*>{1, &plan.access}}) {
      for (std::size_t r = 0; r < sched->resources.size(); ++r) {
        if (const auto holder = sched->result.allocation.holder[r]) {
          const Candidate& c = direct[*holder];
          const Transmission t{c.m2m ? LinkKind::ENB_MTCD : LinkKind::ENB_UE, plan.links.sectorNode, c.id,
                               plan.links.enbPowerDbm};
          rates[*holder] += rateOn(slot, sched->resources[r], t) / 2.0;
        }
      }
    }
    for (std::size_t i = 0; i < direct.size(); ++i) {
      const double u = EvalUtility(direct[i].utility, rates[i]);
      sectorObjective[s] += (direct[i].m2m ? config.lambda : 1.0) * u;
      result.samples.push_back({direct[i].m2m ? Population::M2M : Population::H2H, direct[i].id, rates[i], u});
    }

    std::size_t offset = 0;
    for (const GatewayLink& g : plan.links.gateways) {
      const std::size_t first = offset;
      offset += g.reservedRbs;
      if (g.servedMtcds.empty()) {
        continue;
      }
      double backhaul = 0.0;
      for (std::size_t rb = first; rb < offset; ++rb) {
        backhaul += rateOn(0, rb, {LinkKind::ENB_MTCG, plan.links.sectorNode, g.mtcg, plan.links.enbPowerDbm}) / 2.0;
      }
      std::map<NodeId, double> access;
      for (std::size_t rb = 0; rb < g.reservedRbs; ++rb) {
        const NodeId rx = g.servedMtcds[rb % g.servedMtcds.size()];
        access[rx] += rateOn(1, rb, {LinkKind::MTCG_MTCD, g.mtcg, rx, g.mtcgPowerDbm}) / 2.0;
      }
      const double share = backhaul / static_cast<double>(g.servedMtcds.size());
      for (NodeId m : g.servedMtcds) {
        const double rate = std::min(share, access[m]);
        const double u = EvalUtility(config.utility.mtcd, rate);
        sectorObjective[s] += config.lambda * u;
        result.samples.push_back({Population::GATEWAY, m, rate, u});
      }
    }
  }
  for (std::size_t v = 0; v < pairs.size(); ++v) {
    const auto sector = static_cast<std::size_t>(roster[pairs[v].tx].servingSector);
    if (!InStatisticsRegion(config, sector)) {
      continue;
    }
    const auto& held = coloring.held[v];
    const double power = PowerPerRbDbm(config.radio.mtcdMaxTxPowerDbm, held.size());
    double sum = 0.0;
    for (int color : held) {
      sum += rateOn(1, colorOffset + static_cast<std::size_t>(color),
                    {LinkKind::MTCD_MTCD, pairs[v].tx, pairs[v].rx, power});
    }
    const double perRb = held.empty() ? 0.0 : sum / static_cast<double>(held.size());
    const double u = EvalUtility(config.utility.pair, perRb);
    sectorObjective[sector] += config.lambda * u;
    result.samples.push_back({Population::PAIR, pairs[v].rx, perRb, u});
  }
  for (std::size_t s = 0; s < numSectors; ++s) {
    if (InStatisticsRegion(config, s)) {
      result.sectorObjectives.push_back(sectorObjective[s]);
    }
  }
  if (!result.sectorObjectives.empty()) {
    result.objective = std::accumulate(result.sectorObjectives.begin(), result.sectorObjectives.end(), 0.0) /
                       static_cast<double>(result.sectorObjectives.size());
  }

  if (debug != nullptr) {
    debug->roster = roster;
    debug->graph = graph;
    debug->coloring = coloring;
    std::set<std::tuple<int, NodeId, NodeId>> seen;
    for (std::size_t slot = 0; slot < grid.NumSlots(); ++slot) {
      for (std::size_t rb = 0; rb < grid.NumRbs(); ++rb) {
        for (const Transmission& t : grid.At(slot, rb)) {
          if (seen.emplace(static_cast<int>(t.kind), t.tx, t.rx).second) {
            debug->links.push_back(t);
          }
        }
      }
    }
    debug->grid = std::move(grid);
  }
  return result;
}

std::vector<double> MetricsReport::Utilities(Population p) const {
  std::vector<double> out;
  for (const DropResult& d : drops) {
    for (const UtilitySample& s : d.samples) {
      if (s.population == p) {
        out.push_back(s.utility);
      }
    }
  }
  return out;
}

MetricsReport BuildReport(std::vector<DropResult> drops) {
  MetricsReport report;
  report.drops = std::move(drops);
  for (const DropResult& d : report.drops) {
    report.dropObjectives.push_back(d.objective);
    report.backhaulOverlaps += d.backhaulOverlaps;
    report.sectorCollisions += d.sectorCollisions;
  }
  if (!report.dropObjectives.empty()) {
    report.aggregateCellUtility = std::accumulate(report.dropObjectives.begin(), report.dropObjectives.end(), 0.0) /
                                  static_cast<double>(report.dropObjectives.size());
  }
  return report;
}

MetricsReport RunCampaign(const DropConfig& config, int workers) {
  config.Validate();
  std::vector<DropResult> drops(config.numDrops);
  const auto n = static_cast<std::ptrdiff_t>(config.numDrops);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(std::max(workers, 1))
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      drops[k] = RunDrop(config, static_cast<std::size_t>(k));
    } catch (...) {
#pragma omp critical
      if (!failure) {
        failure = std::current_exception();
      }
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return BuildReport(std::move(drops));
}

MetricsReport RunCampaignSerial(const DropConfig& config) {
  config.Validate();
  std::vector<DropResult> drops;
  drops.reserve(config.numDrops);
  for (std::size_t k = 0; k < config.numDrops; ++k) {
    drops.push_back(RunDrop(config, k));
  }
  return BuildReport(std::move(drops));
}

void WriteSamplesCsv(std::ostream& out, const MetricsReport& report, const RunTag& tag, bool header) {
  if (header) {
    out << "experiment,variant,lambda,mode,drop,population,node,rate_bps,utility\n";
  }
  for (const DropResult& d : report.drops) {
    for (const UtilitySample& s : d.samples) {
      out << tag.experiment << ',' << tag.variant << ',' << Fmt(tag.lambda) << ',' << ToString(tag.mode) << ','
          << d.dropIndex << ',' << ToString(s.population) << ',' << s.node << ',' << Fmt(s.rateBps) << ','
          << Fmt(s.utility) << '\n';
    }
  }
}

void WriteCdfCsv(std::ostream& out, const MetricsReport& report, const RunTag& tag, bool header) {
  if (header) {
    out << "experiment,variant,lambda,mode,population,value,cdf\n";
  }
  for (Population p : {Population::H2H, Population::M2M, Population::PAIR, Population::GATEWAY}) {
    const auto samples = report.Utilities(p);
    if (samples.empty()) {
      continue;
    }
    for (const auto& [value, cdf] : CdfTable(samples).Points()) {
      out << tag.experiment << ',' << tag.variant << ',' << Fmt(tag.lambda) << ',' << ToString(tag.mode) << ','
          << ToString(p) << ',' << Fmt(value) << ',' << Fmt(cdf) << '\n';
    }
  }
}

void WriteSummary(std::ostream& out, const MetricsReport& report, std::string_view prefix) {
  out << prefix << "drops=" << report.drops.size() << '\n';
  out << prefix << "aggregate_cell_utility=" << Fmt(report.aggregateCellUtility) << '\n';
  out << prefix << "backhaul_overlaps=" << report.backhaulOverlaps << '\n';
  for (Population p : {Population::H2H, Population::M2M, Population::PAIR, Population::GATEWAY}) {
    const auto samples = report.Utilities(p);
    out << prefix << ToString(p) << ".count=" << samples.size() << '\n';
    if (samples.empty()) {
      continue;
    }
    const PercentileSummary s = Summarize(CdfTable(samples));
    out << prefix << ToString(p) << ".p10=" << Fmt(s.p10) << '\n';
    out << prefix << ToString(p) << ".p50=" << Fmt(s.p50) << '\n';
    out << prefix << ToString(p) << ".p90=" << Fmt(s.p90) << '\n';
    out << prefix << ToString(p) << ".mean=" << Fmt(s.mean) << '\n';
  }
}

}  // namespace m2m
