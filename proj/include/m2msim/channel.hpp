#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "m2msim/propagation.hpp"
#include "m2msim/resource_grid.hpp"
#include "m2msim/rng.hpp"
#include "m2msim/topology.hpp"
#include "m2msim/types.hpp"

namespace m2m {

/// Noise and link-adaptation constants shared by every link.
struct LinkBudgetConstants {
  double noiseFigureDb = 9.0;
  double thermalNoiseDbmPerHz = -174.0;
  double rbBandwidthHz = 180e3;
  std::size_t numRbs = 50;
  // attenuated, capped Shannon mapping
  double rateAttenuation = 0.75;
  double maxSpectralEfficiency = 6.0;
  double sinrFloorDb = -10.0;

  double NoisePowerDbm() const;

  friend bool operator==(const LinkBudgetConstants&, const LinkBudgetConstants&) = default;
};

struct ChannelConfig {
  LinkBudgetConstants link;
  AntennaPattern antenna;
  double penetrationLossDb = 20.0;  // eNB -> indoor receiver
  double macroMinDistanceM = 10.0;
  double deviceMinDistanceM = 1.0;
  double losBreakpointM = 0.3;

  friend bool operator==(const ChannelConfig&, const ChannelConfig&) = default;
};

/// Per (site, receiver) shadowing in dB; identical for every sector of a site.
class ShadowingMap {
 public:
  ShadowingMap() = default;
  ShadowingMap(std::size_t numNodes, std::size_t numSites);

  double At(std::size_t site, NodeId rx) const { return m_values[rx * m_numSites + site]; }
  double& At(std::size_t site, NodeId rx) { return m_values[rx * m_numSites + site]; }
  std::size_t NumSites() const { return m_numSites; }
  std::size_t NumNodes() const { return m_numSites == 0 ? 0 : m_values.size() / m_numSites; }

 private:
  std::size_t m_numSites = 0;
  std::vector<double> m_values;
};

/**
 * Correlated log-normal shadowing. Each receiver draws one common Gaussian and
 * one Gaussian per site (both N(0, sigma^2)) and sees
 * sqrt(rho) * common + sqrt(1 - rho) * own on the links from that site.
 * Receivers are visited in the order given, ENB_SECTOR entries are skipped.
 * The map is indexed by node id and sized to cover every id in `receivers`.
 */
ShadowingMap SampleShadowing(const NetworkLayout& layout, std::span<const Node> receivers, double sigmaDb,
                             double interSiteCorrelation, Rng& rng);

/**
 * Long-term channel of one drop. Immutable once built; roster ids must equal
 * their indices, sector nodes first.
 */
class ChannelState {
 public:
  ChannelState(const NetworkLayout& layout, std::span<const Node> roster, ShadowingMap shadowing,
               const ChannelConfig& config);

  std::size_t NumSectors() const { return m_numSectors; }
  std::size_t NumNodes() const { return m_nodes.size(); }
  const Node& GetNode(NodeId id) const { return m_nodes[id]; }
  const ChannelConfig& Config() const { return m_config; }

  double PathlossDb(std::size_t sector, NodeId rx) const;
  double ShadowingDb(std::size_t sector, NodeId rx) const;
  double AntennaDb(std::size_t sector, NodeId rx) const;
  /// Antenna - pathloss + shadowing - penetration + receive antenna gain.
  double MacroGainDb(std::size_t sector, NodeId rx) const;
  /// Device-to-device gain (MTCD or MTCG transmitter), no shadowing.
  double DeviceGainDb(NodeId tx, NodeId rx) const;
  double LinkGainDb(NodeId tx, NodeId rx) const;
  double RxPowerDbm(const Transmission& t) const { return t.txPowerDbm + LinkGainDb(t.tx, t.rx); }

 private:
  std::size_t m_numSites;
  std::size_t m_numSectors;
  std::vector<Node> m_nodes;
  ChannelConfig m_config;
  ShadowingMap m_shadowing;
  std::vector<double> m_pathlossDb;  // site-major
  std::vector<double> m_antennaDb;   // sector-major
};

/**
 * Whether a transmission of kind `interferer` counts as interference at a
 * receiver served by a `victim` link. Device-to-device transmitters only hurt
 * other device-to-device receivers; gateway-to-device transmissions are
 * neglected everywhere; eNB transmissions hurt everyone.
 */
bool Interferes(LinkKind interferer, LinkKind victim);

/// SINR of `serving` against the co-channel set (the serving entry itself is skipped).
double SinrDb(const Transmission& serving, std::span<const Transmission> coChannel, const ChannelState& channel);

/// SINR of `serving` on (slot, rb); throws ContractViolation if it does not hold the RB.
double SinrPerRb(const ResourceGrid& grid, std::size_t slot, std::size_t rb, const Transmission& serving,
                 const ChannelState& channel);

/// SINR assuming every other sector transmits on the RB at `enbPowerDbm`.
double FullLoadSinrDb(std::size_t sector, NodeId rx, const ChannelState& channel, double enbPowerDbm);

/// bandwidth * min(attenuation * log2(1 + sinr), cap), zero below the floor.
double RatePerRb(double sinrDb, const LinkBudgetConstants& constants);

/// Per-RB transmit power when `maxPowerDbm` is split evenly across `rbs` RBs.
double PowerPerRbDbm(double maxPowerDbm, std::size_t rbs);

/// Flat link dump: tx,rx,kind,pathloss_db,shadowing_db,antenna_db,rx_power_dbm
void WriteLinkBudget(std::ostream& out, std::span<const Transmission> links, const ChannelState& channel);

}  // namespace m2m
