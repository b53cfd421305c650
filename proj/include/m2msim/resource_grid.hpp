#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "m2msim/types.hpp"

namespace m2m {

enum class LinkKind { ENB_UE, ENB_MTCD, ENB_MTCG, MTCG_MTCD, MTCD_MTCD };

std::string_view ToString(LinkKind kind);

inline bool IsEnbOriginated(LinkKind kind) {
  return kind == LinkKind::ENB_UE || kind == LinkKind::ENB_MTCD || kind == LinkKind::ENB_MTCG;
}

/// One transmitter-receiver link occupying an RB. For eNB links `tx` is the
/// sector node id.
struct Transmission {
  LinkKind kind = LinkKind::ENB_UE;
  NodeId tx = 0;
  NodeId rx = 0;
  double txPowerDbm = 0.0;  // per RB

  friend bool operator==(const Transmission&, const Transmission&) = default;
};

enum class SlotRole { BACKHAUL, ACCESS };

std::string_view ToString(SlotRole role);

/**
 * Network-wide occupancy of slots x RBs. Even slots are backhaul slots and odd
 * slots access slots; every (slot, RB) cell lists all co-channel transmissions.
 */
class ResourceGrid {
 public:
  ResourceGrid(std::size_t numSlots, std::size_t numRbs);

  std::size_t NumSlots() const { return m_numSlots; }
  std::size_t NumRbs() const { return m_numRbs; }
  static SlotRole Role(std::size_t slot) { return slot % 2 == 0 ? SlotRole::BACKHAUL : SlotRole::ACCESS; }

  void Assign(std::size_t slot, std::size_t rb, const Transmission& t);
  std::span<const Transmission> At(std::size_t slot, std::size_t rb) const;
  bool Holds(std::size_t slot, std::size_t rb, const Transmission& t) const;

  /// Flat dump: slot,role,rb,kind,tx,rx,tx_power_dbm
  void Write(std::ostream& out) const;

 private:
  std::size_t Index(std::size_t slot, std::size_t rb) const;

  std::size_t m_numSlots;
  std::size_t m_numRbs;
  std::vector<std::vector<Transmission>> m_cells;
};

/// Count of RBs in `slot` where an ENB_MTCG transmission shares the RB with
/// any other transmission of the same sector. Zero means the backhaul
/// reservation is orthogonal.
std::size_t CountBackhaulOverlaps(const ResourceGrid& grid, std::size_t slot);

/// Count of (slot, RB, sector) cells holding more than one eNB-originated
/// transmission.
std::size_t CountSectorCollisions(const ResourceGrid& grid);

}  // namespace m2m
