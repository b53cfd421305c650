#include "m2msim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "m2msim/errors.hpp"

namespace m2m {

double LinkBudgetConstants::NoisePowerDbm() const {
  return thermalNoiseDbmPerHz + 10.0 * std::log10(rbBandwidthHz) + noiseFigureDb;
}

ShadowingMap::ShadowingMap(std::size_t numNodes, std::size_t numSites)
    : m_numSites(numSites), m_values(numNodes * numSites, 0.0) {}

ShadowingMap SampleShadowing(const NetworkLayout& layout, std::span<const Node> receivers, double sigmaDb,
                             double interSiteCorrelation, Rng& rng) {
  if (!(interSiteCorrelation >= 0.0 && interSiteCorrelation <= 1.0)) {
    throw ConfigError("inter-site shadowing correlation must lie in [0, 1]");
  }
  NodeId maxId = 0;
  for (const Node& n : receivers) {
    maxId = std::max(maxId, n.id);
  }
  const std::size_t numSites = layout.NumSites();
  ShadowingMap map(receivers.empty() ? 0 : maxId + 1, numSites);
  std::normal_distribution<double> gauss(0.0, sigmaDb);
  const double common = std::sqrt(interSiteCorrelation);
  const double own = std::sqrt(1.0 - interSiteCorrelation);
  for (const Node& n : receivers) {
    if (n.kind == NodeKind::ENB_SECTOR) {
      continue;
    }
    const double c = gauss(rng);
    for (std::size_t site = 0; site < numSites; ++site) {
      map.At(site, n.id) = common * c + own * gauss(rng);
    }
  }
  return map;
}

ChannelState::ChannelState(const NetworkLayout& layout, std::span<const Node> roster, ShadowingMap shadowing,
                           const ChannelConfig& config)
    : m_numSites(layout.NumSites()),
      m_numSectors(layout.NumSectors()),
      m_nodes(roster.begin(), roster.end()),
      m_config(config),
      m_shadowing(std::move(shadowing)) {
  const std::size_t n = m_nodes.size();
  if (n < m_numSectors) {
    throw ContractViolation("roster must start with exactly one ENB_SECTOR node per sector");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (m_nodes[i].id != i) {
      throw ContractViolation("roster ids must equal their index");
    }
    if ((i < m_numSectors) != (m_nodes[i].kind == NodeKind::ENB_SECTOR)) {
      throw ContractViolation("roster must start with exactly one ENB_SECTOR node per sector");
    }
  }
  m_pathlossDb.assign(m_numSites * n, 0.0);
  m_antennaDb.assign(m_numSectors * n, 0.0);
  for (std::size_t rx = m_numSectors; rx < n; ++rx) {
    const Position p = m_nodes[rx].position;
    for (std::size_t site = 0; site < m_numSites; ++site) {
      const Position src = layout.NearestSiteImage(static_cast<int>(site), p);
      const double d = std::max(Distance(src, p), 1e-6);
      m_pathlossDb[site * n + rx] = PathlossMacroDb(d / 1000.0, config.macroMinDistanceM / 1000.0);
      const double angle = std::atan2(p.y - src.y, p.x - src.x) * 180.0 / std::numbers::pi;
      for (int s = 0; s < kSectorsPerSite; ++s) {
        const std::size_t sector = site * kSectorsPerSite + s;
        AntennaPattern pattern = config.antenna;
        pattern.peakGainDbi = m_nodes[sector].antennaGainDbi;
        m_antennaDb[sector * n + rx] = AntennaGainDb(layout.SectorBoresight(static_cast<int>(sector)), angle, pattern);
      }
    }
  }
}

double ChannelState::PathlossDb(std::size_t sector, NodeId rx) const {
  return m_pathlossDb[(sector / kSectorsPerSite) * m_nodes.size() + rx];
}

double ChannelState::ShadowingDb(std::size_t sector, NodeId rx) const {
  if (rx >= m_shadowing.NumNodes()) {
    return 0.0;
  }
  return m_shadowing.At(sector / kSectorsPerSite, rx);
}

double ChannelState::AntennaDb(std::size_t sector, NodeId rx) const { return m_antennaDb[sector * m_nodes.size() + rx]; }

double ChannelState::MacroGainDb(std::size_t sector, NodeId rx) const {
  const Node& node = m_nodes[rx];
  const double penetration = node.indoor ? m_config.penetrationLossDb : 0.0;
  return AntennaDb(sector, rx) - PathlossDb(sector, rx) + ShadowingDb(sector, rx) - penetration + node.antennaGainDbi;
}

double ChannelState::DeviceGainDb(NodeId tx, NodeId rx) const {
  const Node& a = m_nodes[tx];
  const Node& b = m_nodes[rx];
  if (a.kind == NodeKind::ENB_SECTOR) {
    throw ContractViolation("DeviceGainDb called with an eNB transmitter");
  }
  const double d = std::max(Distance(a.position, b.position), m_config.deviceMinDistanceM);
  return a.antennaGainDbi + b.antennaGainDbi - PathlossMtcdMtcdDb(d, m_config.losBreakpointM);
}

double ChannelState::LinkGainDb(NodeId tx, NodeId rx) const {
  if (tx < m_numSectors) {
    return MacroGainDb(tx, rx);
  }
  return DeviceGainDb(tx, rx);
}

bool Interferes(LinkKind interferer, LinkKind victim) {
  switch (interferer) {
    case LinkKind::MTCD_MTCD:
      return victim == LinkKind::MTCD_MTCD;
    case LinkKind::MTCG_MTCD:
      return false;
    default:
      return true;
  }
}

double SinrDb(const Transmission& serving, std::span<const Transmission> coChannel, const ChannelState& channel) {
  const double signal = DbToLinear(channel.RxPowerDbm(serving));
  double denominator = DbToLinear(channel.Config().link.NoisePowerDbm());
  for (const Transmission& t : coChannel) {
    if (t == serving || t.tx == serving.rx || !Interferes(t.kind, serving.kind)) {
      continue;
    }
    denominator += DbToLinear(t.txPowerDbm + channel.LinkGainDb(t.tx, serving.rx));
  }
  return LinearToDb(signal / denominator);
}

double SinrPerRb(const ResourceGrid& grid, std::size_t slot, std::size_t rb, const Transmission& serving,
                 const ChannelState& channel) {
  if (!grid.Holds(slot, rb, serving)) {
    throw ContractViolation("RB " + std::to_string(rb) + " of slot " + std::to_string(slot) +
                            " is not assigned to the serving link");
  }
  return SinrDb(serving, grid.At(slot, rb), channel);
}

double FullLoadSinrDb(std::size_t sector, NodeId rx, const ChannelState& channel, double enbPowerDbm) {
  const double signal = DbToLinear(enbPowerDbm + channel.MacroGainDb(sector, rx));
  double denominator = DbToLinear(channel.Config().link.NoisePowerDbm());
  for (std::size_t s = 0; s < channel.NumSectors(); ++s) {
    if (s != sector) {
      denominator += DbToLinear(enbPowerDbm + channel.MacroGainDb(s, rx));
    }
  }
  return LinearToDb(signal / denominator);
}

double RatePerRb(double sinrDb, const LinkBudgetConstants& constants) {
  if (sinrDb < constants.sinrFloorDb) {
    return 0.0;
  }
  const double efficiency = constants.rateAttenuation * std::log2(1.0 + DbToLinear(sinrDb));
  return constants.rbBandwidthHz * std::min(efficiency, constants.maxSpectralEfficiency);
}

double PowerPerRbDbm(double maxPowerDbm, std::size_t rbs) {
  return maxPowerDbm - 10.0 * std::log10(static_cast<double>(std::max<std::size_t>(rbs, 1)));
}

void WriteLinkBudget(std::ostream& out, std::span<const Transmission> links, const ChannelState& channel) {
  out << "tx,rx,kind,pathloss_db,shadowing_db,antenna_db,rx_power_dbm\n";
  for (const Transmission& t : links) {
    double pathloss = 0.0;
    double shadowing = 0.0;
    double antenna = 0.0;
    if (t.tx < channel.NumSectors()) {
      pathloss = channel.PathlossDb(t.tx, t.rx);
      shadowing = channel.ShadowingDb(t.tx, t.rx);
      antenna = channel.AntennaDb(t.tx, t.rx);
    } else {
      pathloss = -channel.DeviceGainDb(t.tx, t.rx);
    }
    out << t.tx << ',' << t.rx << ',' << ToString(t.kind) << ',' << pathloss << ',' << shadowing << ',' << antenna
        << ',' << channel.RxPowerDbm(t) << '\n';
  }
}

}  // namespace m2m
