#include "m2msim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>

#include "m2msim/errors.hpp"

namespace m2m {

std::string_view ToString(NodeKind kind) {
  switch (kind) {
    case NodeKind::ENB_SECTOR:
      return "ENB_SECTOR";
    case NodeKind::UE:
      return "UE";
    case NodeKind::MTCD:
      return "MTCD";
    case NodeKind::MTCG:
      return "MTCG";
  }
  return "?";
}

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Axial hex directions, walked in order when tracing a ring.
constexpr std::array<std::array<int, 2>, 6> kHexDirections{{{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}}};

Position AxialToPosition(int q, int r, double isd) {
  return {isd * (q + r / 2.0), isd * (r * std::numbers::sqrt3 / 2.0)};
}

Position Rotate(Position p, double angleDeg) {
  const double c = std::cos(angleDeg * kDegToRad);
  const double s = std::sin(angleDeg * kDegToRad);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

// Cluster translation (i a1 + j a2) for an N = i^2 + ij + j^2 site cluster.
Position ClusterTranslation(int numSites, double isd) {
  int i = 1;
  int j = 0;
  if (numSites == 7) {
    i = 2;
    j = 1;
  } else if (numSites == 19) {
    i = 3;
    j = 2;
  }
  return AxialToPosition(i, j, isd);
}

void CheckCount(int count, const char* what) {
  if (count < 0) {
    throw ConfigError(std::string(what) + " must be >= 0, got " + std::to_string(count));
  }
}

Position SampleInSector(const NetworkLayout& layout, int sector, double minDistance, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double radius = layout.CellRadius();
  const double inner = std::min(minDistance, radius);
  const double r = std::sqrt(unit(rng) * (radius * radius - inner * inner) + inner * inner);
  const double angle = layout.SectorBoresight(sector) + (unit(rng) - 0.5) * 120.0;
  const Position site = layout.sites[NetworkLayout::SiteOfSector(sector)];
  return {site.x + r * std::cos(angle * kDegToRad), site.y + r * std::sin(angle * kDegToRad)};
}

Position SampleInRect(const Rect& rect, Rng& rng) {
  std::uniform_real_distribution<double> ux(rect.lo.x, rect.hi.x);
  std::uniform_real_distribution<double> uy(rect.lo.y, rect.hi.y);
  const double x = ux(rng);
  return {x, uy(rng)};
}

}  // namespace

Rect ApartmentBlock::StripeRect(int stripe) const {
  const double y0 = origin.y + stripe * (rows * apartmentSize + stripeSeparation);
  return {{origin.x, y0}, {origin.x + Width(), y0 + rows * apartmentSize}};
}

Rect ApartmentBlock::ApartmentRect(int apartment) const {
  const int perStripe = rows * columns;
  const int stripe = apartment / perStripe;
  const int row = (apartment % perStripe) / columns;
  const int column = apartment % columns;
  const Rect s = StripeRect(stripe);
  const Position lo{s.lo.x + column * apartmentSize, s.lo.y + row * apartmentSize};
  return {lo, {lo.x + apartmentSize, lo.y + apartmentSize}};
}

bool ApartmentBlock::Contains(Position p) const {
  for (int s = 0; s < stripes; ++s) {
    if (StripeRect(s).Contains(p)) {
      return true;
    }
  }
  return false;
}

double NetworkLayout::CellRadius() const { return isd / std::numbers::sqrt3; }

Position NetworkLayout::NearestSiteImage(int site, Position rx) const {
  Position best = sites[site];
  double bestDistance = Distance(best, rx);
  for (const Position& shift : wrapShifts) {
    const Position image{sites[site].x + shift.x, sites[site].y + shift.y};
    const double d = Distance(image, rx);
    if (d < bestDistance) {
      best = image;
      bestDistance = d;
    }
  }
  return best;
}

double NetworkLayout::SiteDistance(int a, int b) const { return Distance(NearestSiteImage(a, sites[b]), sites[b]); }

NetworkLayout BuildLayout(int numSites, double isd, bool wraparound, const BlockPlacement& blocks) {
  if (numSites != 1 && numSites != 7 && numSites != 19) {
    throw ConfigError("num_sites must be 1, 7 or 19, got " + std::to_string(numSites));
  }
  if (!(isd > 0.0)) {
    throw ConfigError("isd must be positive");
  }
  NetworkLayout layout;
  layout.isd = isd;
  layout.wraparound = wraparound;
  layout.sites.push_back({0.0, 0.0});
  const int rings = numSites == 1 ? 0 : (numSites == 7 ? 1 : 2);
  for (int k = 1; k <= rings; ++k) {
    int q = kHexDirections[4][0] * k;
    int r = kHexDirections[4][1] * k;
    for (const auto& dir : kHexDirections) {
      for (int step = 0; step < k; ++step) {
        layout.sites.push_back(AxialToPosition(q, r, isd));
        q += dir[0];
        r += dir[1];
      }
    }
  }
  if (wraparound) {
    const Position t = ClusterTranslation(numSites, isd);
    for (int m = 0; m < 6; ++m) {
      layout.wrapShifts.push_back(Rotate(t, 60.0 * m));
    }
  }
  for (const Position& site : layout.sites) {
    ApartmentBlock block;
    block.apartmentSize = blocks.apartmentSize;
    block.stripeSeparation = blocks.stripeSeparation;
    const double offset = blocks.offsetFraction * isd;
    const Position centroid{site.x + offset * std::cos(blocks.azimuthDeg * kDegToRad),
                            site.y + offset * std::sin(blocks.azimuthDeg * kDegToRad)};
    block.origin = {centroid.x - block.Width() / 2.0, centroid.y - block.Height() / 2.0};
    layout.apartmentBlocks.push_back(block);
  }
  return layout;
}

int StrongestSector(const NetworkLayout& layout, Position p, const PlacementOptions& options) {
  int best = 0;
  double bestGain = -1e300;
  for (std::size_t site = 0; site < layout.NumSites(); ++site) {
    const Position src = layout.NearestSiteImage(static_cast<int>(site), p);
    const double d = Distance(src, p);
    const double pathloss = PathlossMacroDb(std::max(d, 1e-3) / 1000.0);
    const double angle = std::atan2(p.y - src.y, p.x - src.x) / kDegToRad;
    for (int s = 0; s < kSectorsPerSite; ++s) {
      const int sector = static_cast<int>(site) * kSectorsPerSite + s;
      const double gain = AntennaGainDb(layout.SectorBoresight(sector), angle, options.antenna) - pathloss;
      if (gain > bestGain) {
        bestGain = gain;
        best = sector;
      }
    }
  }
  return best;
}

std::vector<Node> MakeSectorNodes(const NetworkLayout& layout, double maxTxPowerDbm, double antennaGainDbi) {
  std::vector<Node> nodes;
  for (std::size_t sector = 0; sector < layout.NumSectors(); ++sector) {
    Node n;
    n.id = static_cast<NodeId>(sector);
    n.kind = NodeKind::ENB_SECTOR;
    n.position = layout.sites[NetworkLayout::SiteOfSector(static_cast<int>(sector))];
    n.maxTxPowerDbm = maxTxPowerDbm;
    n.antennaGainDbi = antennaGainDbi;
    n.servingSector = static_cast<int>(sector);
    nodes.push_back(n);
  }
  return nodes;
}

std::vector<Node> PlaceUes(const NetworkLayout& layout, int perSector, Rng& rng, NodeId firstId,
                           const PlacementOptions& options) {
  CheckCount(perSector, "UEs per sector");
  std::vector<Node> nodes;
  NodeId id = firstId;
  for (std::size_t sector = 0; sector < layout.NumSectors(); ++sector) {
    for (int k = 0; k < perSector; ++k) {
      Node n;
      n.id = id++;
      n.kind = NodeKind::UE;
      n.position = SampleInSector(layout, static_cast<int>(sector), options.minDistanceM, rng);
      n.maxTxPowerDbm = 23.0;
      n.servingSector = StrongestSector(layout, n.position, options);
      nodes.push_back(n);
    }
  }
  return nodes;
}

std::vector<Node> PlaceMtcds(const NetworkLayout& layout, int outdoorPerSector, int indoorPairsPerBlock, Rng& rng,
                             NodeId firstId, const PlacementOptions& options) {
  CheckCount(outdoorPerSector, "outdoor MTCDs per sector");
  CheckCount(indoorPairsPerBlock, "indoor pairs per block");
  for (const ApartmentBlock& block : layout.apartmentBlocks) {
    if (indoorPairsPerBlock > block.ApartmentCount()) {
      throw ConfigError("indoor pairs per block (" + std::to_string(indoorPairsPerBlock) + ") exceeds the " +
                        std::to_string(block.ApartmentCount()) + " apartments of a block");
    }
  }
  std::vector<Node> nodes;
  NodeId id = firstId;
  auto makeMtcd = [&](Position p) {
    Node n;
    n.id = id++;
    n.kind = NodeKind::MTCD;
    n.position = p;
    n.maxTxPowerDbm = 14.0;
    n.servingSector = StrongestSector(layout, p, options);
    return n;
  };
  for (std::size_t sector = 0; sector < layout.NumSectors(); ++sector) {
    for (int k = 0; k < outdoorPerSector; ++k) {
      nodes.push_back(makeMtcd(SampleInSector(layout, static_cast<int>(sector), options.minDistanceM, rng)));
    }
  }
  for (std::size_t b = 0; b < layout.apartmentBlocks.size(); ++b) {
    const ApartmentBlock& block = layout.apartmentBlocks[b];
    std::vector<int> apartments(block.ApartmentCount());
    for (int a = 0; a < block.ApartmentCount(); ++a) {
      apartments[a] = a;
    }
    // Partial Fisher-Yates: the first indoorPairsPerBlock entries are distinct.
    for (int k = 0; k < indoorPairsPerBlock; ++k) {
      std::uniform_int_distribution<int> pick(k, block.ApartmentCount() - 1);
      std::swap(apartments[k], apartments[pick(rng)]);
    }
    for (int k = 0; k < indoorPairsPerBlock; ++k) {
      const Rect room = block.ApartmentRect(apartments[k]);
      Node a = makeMtcd(SampleInRect(room, rng));
      Node c = makeMtcd(SampleInRect(room, rng));
      for (Node* n : {&a, &c}) {
        n->indoor = true;
        n->block = static_cast<int>(b);
        n->apartment = apartments[k];
      }
      a.pairPeer = c.id;
      c.pairPeer = a.id;
      nodes.push_back(a);
      nodes.push_back(c);
    }
  }
  return nodes;
}

std::vector<Node> PlaceMtcgs(const NetworkLayout& layout, int perSector, Rng& /*rng*/, NodeId firstId) {
  CheckCount(perSector, "MTCGs per sector");
  std::vector<Node> nodes;
  NodeId id = firstId;
  for (std::size_t sector = 0; sector < layout.NumSectors(); ++sector) {
    const int site = NetworkLayout::SiteOfSector(static_cast<int>(sector));
    for (int k = 0; k < perSector; ++k) {
      Node n;
      n.id = id++;
      n.kind = NodeKind::MTCG;
      n.position = layout.apartmentBlocks[site].Centroid();
      n.maxTxPowerDbm = 14.0;
      n.servingSector = static_cast<int>(sector);
      n.block = site;
      nodes.push_back(n);
    }
  }
  return nodes;
}

std::vector<Node> ApplyDutyCycle(std::span<const Node> nodes, double duty, Rng& rng) {
  if (!(duty >= 0.0 && duty <= 1.0)) {
    throw ConfigError("duty cycle must lie in [0, 1]");
  }
  std::vector<Node> out(nodes.begin(), nodes.end());
  std::unordered_map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < out.size(); ++i) {
    index.emplace(out[i].id, i);
  }
  std::bernoulli_distribution on(duty);
  std::vector<bool> decided(out.size(), false);
  for (std::size_t i = 0; i < out.size(); ++i) {
    Node& n = out[i];
    if (n.kind != NodeKind::MTCD) {
      n.active = true;
      continue;
    }
    if (decided[i]) {
      continue;
    }
    n.active = on(rng);
    decided[i] = true;
    if (n.pairPeer) {
      const auto it = index.find(*n.pairPeer);
      if (it != index.end()) {
        out[it->second].active = n.active;
        decided[it->second] = true;
      }
    }
  }
  return out;
}

void WriteRoster(std::ostream& out, std::span<const Node> nodes) {
  out << "id,kind,x,y,sector,peer\n";
  for (const Node& n : nodes) {
    out << n.id << ',' << ToString(n.kind) << ',' << n.position.x << ',' << n.position.y << ',' << n.servingSector
        << ',' << (n.pairPeer ? static_cast<long long>(*n.pairPeer) : -1LL) << '\n';
  }
}

}  // namespace m2m
