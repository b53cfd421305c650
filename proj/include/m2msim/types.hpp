#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

namespace m2m {

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

inline double Distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

using NodeId = std::uint32_t;

enum class NodeKind { ENB_SECTOR, UE, MTCD, MTCG };

std::string_view ToString(NodeKind kind);

/**
 * One radio endpoint. In a drop roster the id equals the node's index and
 * ENB_SECTOR nodes come first, so a sector's node id is also its sector index.
 */
struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::UE;
  Position position;
  double maxTxPowerDbm = 0.0;
  double antennaGainDbi = 0.0;
  bool active = true;
  bool indoor = false;
  int servingSector = -1;
  std::optional<NodeId> pairPeer;
  int block = -1;      // apartment block index, indoor nodes and MTCGs only
  int apartment = -1;  // apartment index inside the block, indoor nodes only

  friend bool operator==(const Node&, const Node&) = default;
};

}  // namespace m2m
