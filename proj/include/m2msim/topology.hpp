#pragma once

#include <array>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "m2msim/propagation.hpp"
#include "m2msim/rng.hpp"
#include "m2msim/types.hpp"

namespace m2m {

inline constexpr int kSectorsPerSite = 3;

struct Rect {
  Position lo;
  Position hi;

  bool Contains(Position p) const { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
};

/**
 * Dual-stripe apartment block. Each stripe is `rows` x `columns` square
 * apartments on a single floor; stripes are stacked along y with a street of
 * `stripeSeparation` metres between them. Apartments are numbered stripe by
 * stripe, row by row.
 */
struct ApartmentBlock {
  Position origin;  // lower-left corner of the first stripe
  int stripes = 2;
  int floorsPerStripe = 1;
  int rows = 4;
  int columns = 10;
  double apartmentSize = 10.0;
  double stripeSeparation = 10.0;

  int ApartmentCount() const { return stripes * floorsPerStripe * rows * columns; }
  double Width() const { return columns * apartmentSize; }
  double Height() const { return stripes * rows * apartmentSize + (stripes - 1) * stripeSeparation; }
  Position Centroid() const { return {origin.x + Width() / 2.0, origin.y + Height() / 2.0}; }
  Rect StripeRect(int stripe) const;
  Rect ApartmentRect(int apartment) const;
  /// True when p lies inside one of the stripes (the street is outside).
  bool Contains(Position p) const;
};

struct BlockPlacement {
  double apartmentSize = 10.0;
  double stripeSeparation = 10.0;
  /// Block centroid sits at offsetFraction * isd from its site along azimuthDeg.
  double offsetFraction = 0.3;
  double azimuthDeg = 30.0;

  friend bool operator==(const BlockPlacement&, const BlockPlacement&) = default;
};

struct NetworkLayout {
  std::vector<Position> sites;
  std::array<double, kSectorsPerSite> sectorOrientations{30.0, 150.0, 270.0};
  double isd = 500.0;
  std::vector<ApartmentBlock> apartmentBlocks;  // one per site
  bool wraparound = false;
  /// Translations of the whole cluster used for wraparound (empty when off).
  std::vector<Position> wrapShifts;

  std::size_t NumSites() const { return sites.size(); }
  std::size_t NumSectors() const { return sites.size() * kSectorsPerSite; }
  static int SiteOfSector(int sector) { return sector / kSectorsPerSite; }
  double SectorBoresight(int sector) const { return sectorOrientations[sector % kSectorsPerSite]; }
  double CellRadius() const;
  /// Image of `site` (original or wrapped copy) closest to `rx`.
  Position NearestSiteImage(int site, Position rx) const;
  /// Site-to-site distance honouring wraparound.
  double SiteDistance(int a, int b) const;
};

/// Hexagonal grid of 1, 7 or 19 sites centred at the origin, ordered by ring.
NetworkLayout BuildLayout(int numSites, double isd, bool wraparound, const BlockPlacement& blocks = {});

struct PlacementOptions {
  AntennaPattern antenna;
  double minDistanceM = 35.0;  // exclusion radius around the mast
};

/// Sector with the strongest mean received power at `p` (pathloss and
/// antenna pattern, no shadowing). Ties go to the lowest sector id.
int StrongestSector(const NetworkLayout& layout, Position p, const PlacementOptions& options = {});

/// ENB_SECTOR nodes, one per sector, ids 0..numSectors-1.
std::vector<Node> MakeSectorNodes(const NetworkLayout& layout, double maxTxPowerDbm = 46.0, double antennaGainDbi = 14.0);

std::vector<Node> PlaceUes(const NetworkLayout& layout, int perSector, Rng& rng, NodeId firstId = 0,
                           const PlacementOptions& options = {});

/// Outdoor MTCDs first (perSector per sector), then indoor pairs block by
/// block; both peers of a pair share one apartment.
std::vector<Node> PlaceMtcds(const NetworkLayout& layout, int outdoorPerSector, int indoorPairsPerBlock, Rng& rng,
                             NodeId firstId = 0, const PlacementOptions& options = {});

/// MTCGs at the block centroid of their cell, serving their own sector.
std::vector<Node> PlaceMtcgs(const NetworkLayout& layout, int perSector, Rng& rng, NodeId firstId = 0);

/// Activates each MTCD (pairs jointly) with probability `duty`; other nodes
/// are returned active.
std::vector<Node> ApplyDutyCycle(std::span<const Node> nodes, double duty, Rng& rng);

/// CSV roster: id,kind,x,y,sector,peer (peer -1 when unpaired).
void WriteRoster(std::ostream& out, std::span<const Node> nodes);

}  // namespace m2m
