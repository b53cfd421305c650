#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "m2msim/resource_grid.hpp"
#include "m2msim/types.hpp"
#include "m2msim/utility.hpp"

namespace m2m {

/// A UE (H2H) or MTCD (M2M) competing for RBs of one eNB sector.
struct Candidate {
  NodeId id = 0;
  bool m2m = false;
  UtilitySpec utility;
  std::vector<double> ratePerResource;  // rate contribution of each resource
  double initialRate = 0.0;             // rate already granted earlier in the window
};

/**
 * Aggregate-utility problem over a set of resources:
 *   max_S  sum_{i in H} U_i(R_i) + lambda * sum_{j in M} U_j(R_j)
 * where R = initialRate + rates of the resources granted by S.
 */
struct SchedulingProblem {
  std::vector<Candidate> candidates;
  double lambda = 0.8;
  std::size_t numResources = 0;
};

/// Holder (candidate index) of every resource; nullopt leaves it idle.
struct AllocationMatrix {
  std::vector<std::optional<std::size_t>> holder;
};

struct ScheduleResult {
  AllocationMatrix allocation;
  std::vector<double> rates;  // final R per candidate
  double objective = 0.0;
};

/// Accumulated rate of every candidate under an allocation.
std::vector<double> AccumulatedRates(const SchedulingProblem& problem, const AllocationMatrix& allocation);

/// Recomputes the objective from scratch.
double EvaluateObjective(const SchedulingProblem& problem, const AllocationMatrix& allocation);

/**
 * Greedy MAX-Utility: resources in index order, each to the candidate with the
 * largest lambda-weighted marginal utility given its accumulated rate (ties to
 * the lowest node id). A resource stays idle when no marginal is positive.
 */
ScheduleResult MaxUtilitySchedule(const SchedulingProblem& problem);

/// Exhaustive optimum over all (candidates + 1)^resources assignments; first
/// optimum in enumeration order wins. Throws CapacityError above the guard.
ScheduleResult BruteForceSchedule(const SchedulingProblem& problem, std::uint64_t maxAssignments = 1'000'000);

/// ceil(total / perRb), capped at numRbs. Throws DomainError when perRb <= 0.
std::size_t EstimateBackhaulRbs(double totalMtcdRate, double avgRatePerRb, std::size_t numRbs);

/// eNB-to-MTCG reservation of one gateway plus the MTCDs it relays to.
struct GatewayLink {
  NodeId mtcg = 0;
  std::size_t reservedRbs = 0;
  std::vector<NodeId> servedMtcds;
  double mtcgPowerDbm = 14.0;  // per RB
};

/// Everything one sector schedules within a backhaul + access unit.
struct SectorLinks {
  NodeId sectorNode = 0;
  double enbPowerDbm = 29.0;  // per RB
  double lambda = 0.8;
  /// Direct eNB links; ratePerResource has one entry per RB of a slot.
  std::vector<Candidate> direct;
  std::vector<GatewayLink> gateways;
};

struct SlotSchedule {
  ScheduleResult result;               // direct links only
  std::vector<std::size_t> resources;  // RB index of every scheduled resource
};

/**
 * Backhaul slot: reserves consecutive RBs from 0 for each gateway (orthogonal
 * eNB-to-MTCG transmissions), then MAX-Utility over the remaining RBs for the
 * direct links. `accumulated` carries each direct candidate's rate in and out.
 */
SlotSchedule ScheduleBackhaulSlot(const SectorLinks& links, ResourceGrid& grid, std::size_t slot,
                                  std::vector<double>& accumulated);

/**
 * Access slot: MAX-Utility over all RBs for the direct links, and each
 * gateway's MTCG-to-MTCD transmissions on its reserved RB range (reused by
 * every gateway, RBs dealt round-robin to its served MTCDs).
 */
SlotSchedule ScheduleAccessSlot(const SectorLinks& links, ResourceGrid& grid, std::size_t slot,
                                std::vector<double>& accumulated);

}  // namespace m2m
