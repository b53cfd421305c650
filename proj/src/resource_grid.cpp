#include "m2msim/resource_grid.hpp"

#include <map>
#include <string>

#include "m2msim/errors.hpp"

namespace m2m {

std::string_view ToString(LinkKind kind) {
  switch (kind) {
    case LinkKind::ENB_UE:
      return "ENB_UE";
    case LinkKind::ENB_MTCD:
      return "ENB_MTCD";
    case LinkKind::ENB_MTCG:
      return "ENB_MTCG";
    case LinkKind::MTCG_MTCD:
      return "MTCG_MTCD";
    case LinkKind::MTCD_MTCD:
      return "MTCD_MTCD";
  }
  return "?";
}

std::string_view ToString(SlotRole role) { return role == SlotRole::BACKHAUL ? "BACKHAUL" : "ACCESS"; }

ResourceGrid::ResourceGrid(std::size_t numSlots, std::size_t numRbs)
    : m_numSlots(numSlots), m_numRbs(numRbs), m_cells(numSlots * numRbs) {}

std::size_t ResourceGrid::Index(std::size_t slot, std::size_t rb) const {
  if (slot >= m_numSlots || rb >= m_numRbs) {
    throw ContractViolation("grid cell (" + std::to_string(slot) + ", " + std::to_string(rb) + ") out of range");
  }
  return slot * m_numRbs + rb;
}

void ResourceGrid::Assign(std::size_t slot, std::size_t rb, const Transmission& t) {
  m_cells[Index(slot, rb)].push_back(t);
}

std::span<const Transmission> ResourceGrid::At(std::size_t slot, std::size_t rb) const {
  return m_cells[Index(slot, rb)];
}

bool ResourceGrid::Holds(std::size_t slot, std::size_t rb, const Transmission& t) const {
  for (const Transmission& held : At(slot, rb)) {
    if (held == t) {
      return true;
    }
  }
  return false;
}

void ResourceGrid::Write(std::ostream& out) const {
  out << "slot,role,rb,kind,tx,rx,tx_power_dbm\n";
  for (std::size_t slot = 0; slot < m_numSlots; ++slot) {
    for (std::size_t rb = 0; rb < m_numRbs; ++rb) {
      for (const Transmission& t : At(slot, rb)) {
        out << slot << ',' << ToString(Role(slot)) << ',' << rb << ',' << ToString(t.kind) << ',' << t.tx << ','
            << t.rx << ',' << t.txPowerDbm << '\n';
      }
    }
  }
}

std::size_t CountBackhaulOverlaps(const ResourceGrid& grid, std::size_t slot) {
  std::size_t overlaps = 0;
  for (std::size_t rb = 0; rb < grid.NumRbs(); ++rb) {
    const auto cell = grid.At(slot, rb);
    for (const Transmission& t : cell) {
      if (t.kind != LinkKind::ENB_MTCG) {
        continue;
      }
      for (const Transmission& other : cell) {
        if (&other != &t && IsEnbOriginated(other.kind) && other.tx == t.tx) {
          ++overlaps;
          break;
        }
      }
    }
  }
  return overlaps;
}

std::size_t CountSectorCollisions(const ResourceGrid& grid) {
  std::size_t collisions = 0;
  for (std::size_t slot = 0; slot < grid.NumSlots(); ++slot) {
    for (std::size_t rb = 0; rb < grid.NumRbs(); ++rb) {
      std::map<NodeId, int> perSector;
      for (const Transmission& t : grid.At(slot, rb)) {
        if (IsEnbOriginated(t.kind) && ++perSector[t.tx] == 2) {
          ++collisions;
        }
      }
    }
  }
  return collisions;
}

}  // namespace m2m
