#include "m2msim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "m2msim/errors.hpp"

namespace m2m {

namespace {

double Weight(const Candidate& c, double lambda) { return c.m2m ? lambda : 1.0; }

double ObjectiveFromRates(const SchedulingProblem& problem, const std::vector<double>& rates) {
  double objective = 0.0;
  for (std::size_t i = 0; i < problem.candidates.size(); ++i) {
    const Candidate& c = problem.candidates[i];
    objective += Weight(c, problem.lambda) * EvalUtility(c.utility, rates[i]);
  }
  return objective;
}

void CheckProblem(const SchedulingProblem& problem) {
  if (!(problem.lambda >= 0.0 && problem.lambda <= 1.0)) {
    throw DomainError("lambda must lie in [0, 1]");
  }
  for (const Candidate& c : problem.candidates) {
    if (c.ratePerResource.size() < problem.numResources) {
      throw ContractViolation("candidate " + std::to_string(c.id) + " lacks per-resource rates");
    }
  }
}

SchedulingProblem SlotProblem(const SectorLinks& links, const std::vector<std::size_t>& rbs,
                              const std::vector<double>& accumulated) {
  SchedulingProblem problem;
  problem.lambda = links.lambda;
  problem.numResources = rbs.size();
  problem.candidates.reserve(links.direct.size());
  for (std::size_t i = 0; i < links.direct.size(); ++i) {
    Candidate c = links.direct[i];
    c.ratePerResource.clear();
    for (std::size_t rb : rbs) {
      c.ratePerResource.push_back(links.direct[i].ratePerResource.at(rb));
    }
    c.initialRate = accumulated.at(i);
    problem.candidates.push_back(std::move(c));
  }
  return problem;
}

SlotSchedule ScheduleDirect(const SectorLinks& links, ResourceGrid& grid, std::size_t slot,
                            std::vector<std::size_t> rbs, std::vector<double>& accumulated) {
  if (accumulated.size() != links.direct.size()) {
    throw ContractViolation("accumulated rates must match the direct links");
  }
  SlotSchedule out;
  out.resources = std::move(rbs);
  out.result = MaxUtilitySchedule(SlotProblem(links, out.resources, accumulated));
  for (std::size_t r = 0; r < out.resources.size(); ++r) {
    if (const auto holder = out.result.allocation.holder[r]) {
      const Candidate& c = links.direct[*holder];
      grid.Assign(slot, out.resources[r],
                  {c.m2m ? LinkKind::ENB_MTCD : LinkKind::ENB_UE, links.sectorNode, c.id, links.enbPowerDbm});
    }
  }
  accumulated = out.result.rates;
  return out;
}

}  // namespace

std::vector<double> AccumulatedRates(const SchedulingProblem& problem, const AllocationMatrix& allocation) {
  std::vector<double> rates;
  rates.reserve(problem.candidates.size());
  for (const Candidate& c : problem.candidates) {
    rates.push_back(c.initialRate);
  }
  for (std::size_t r = 0; r < allocation.holder.size(); ++r) {
    if (const auto h = allocation.holder[r]) {
      rates[*h] += problem.candidates[*h].ratePerResource[r];
    }
  }
  return rates;
}

double EvaluateObjective(const SchedulingProblem& problem, const AllocationMatrix& allocation) {
  return ObjectiveFromRates(problem, AccumulatedRates(problem, allocation));
}

ScheduleResult MaxUtilitySchedule(const SchedulingProblem& problem) {
  CheckProblem(problem);
  ScheduleResult result;
  result.allocation.holder.assign(problem.numResources, std::nullopt);
  result.rates.reserve(problem.candidates.size());
  for (const Candidate& c : problem.candidates) {
    result.rates.push_back(c.initialRate);
  }
  for (std::size_t r = 0; r < problem.numResources; ++r) {
    std::optional<std::size_t> best;
    double bestGain = 0.0;
    for (std::size_t i = 0; i < problem.candidates.size(); ++i) {
      const Candidate& c = problem.candidates[i];
      const double gain =
          Weight(c, problem.lambda) * MarginalUtility(c.utility, result.rates[i], c.ratePerResource[r]);
      if (gain <= 0.0) {
        continue;
      }
      if (!best || gain > bestGain || (gain == bestGain && c.id < problem.candidates[*best].id)) {
        best = i;
        bestGain = gain;
      }
    }
    if (best) {
      result.allocation.holder[r] = best;
      result.rates[*best] += problem.candidates[*best].ratePerResource[r];
    }
  }
  result.objective = ObjectiveFromRates(problem, result.rates);
  return result;
}

ScheduleResult BruteForceSchedule(const SchedulingProblem& problem, std::uint64_t maxAssignments) {
  CheckProblem(problem);
  const std::uint64_t base = problem.candidates.size() + 1;
  std::uint64_t total = 1;
  for (std::size_t r = 0; r < problem.numResources; ++r) {
    if (total > maxAssignments / base) {
      throw CapacityError("brute-force schedule exceeds " + std::to_string(maxAssignments) + " assignments");
    }
    total *= base;
  }
  // digit 0 = idle, digit k = candidate k - 1; resource 0 is the most significant digit
  std::vector<std::uint64_t> digits(problem.numResources, 0);
  AllocationMatrix current;
  current.holder.assign(problem.numResources, std::nullopt);
  ScheduleResult best;
  bool haveBest = false;
  for (std::uint64_t n = 0; n < total; ++n) {
    for (std::size_t r = 0; r < problem.numResources; ++r) {
      current.holder[r] = digits[r] == 0 ? std::nullopt : std::optional<std::size_t>(digits[r] - 1);
    }
    const auto rates = AccumulatedRates(problem, current);
    const double objective = ObjectiveFromRates(problem, rates);
    if (!haveBest || objective > best.objective) {
      best.allocation = current;
      best.rates = rates;
      best.objective = objective;
      haveBest = true;
    }
    for (std::size_t r = problem.numResources; r-- > 0;) {
      if (++digits[r] < base) {
        break;
      }
      digits[r] = 0;
    }
  }
  return best;
}

std::size_t EstimateBackhaulRbs(double totalMtcdRate, double avgRatePerRb, std::size_t numRbs) {
  if (!(avgRatePerRb > 0.0)) {
    throw DomainError("average rate per RB must be positive");
  }
  if (!(totalMtcdRate >= 0.0)) {
    throw DomainError("total MTCD rate must be non-negative");
  }
  const double needed = std::ceil(totalMtcdRate / avgRatePerRb);
  return needed >= static_cast<double>(numRbs) ? numRbs : static_cast<std::size_t>(needed);
}

SlotSchedule ScheduleBackhaulSlot(const SectorLinks& links, ResourceGrid& grid, std::size_t slot,
                                  std::vector<double>& accumulated) {
  if (ResourceGrid::Role(slot) != SlotRole::BACKHAUL) {
    throw ContractViolation("ScheduleBackhaulSlot needs a backhaul slot");
  }
  std::size_t offset = 0;
  for (const GatewayLink& g : links.gateways) {
    const std::size_t k = std::min(g.reservedRbs, grid.NumRbs() - offset);
    for (std::size_t rb = offset; rb < offset + k; ++rb) {
      grid.Assign(slot, rb, {LinkKind::ENB_MTCG, links.sectorNode, g.mtcg, links.enbPowerDbm});
    }
    offset += k;
  }
  std::vector<std::size_t> rbs;
  for (std::size_t rb = offset; rb < grid.NumRbs(); ++rb) {
    rbs.push_back(rb);
  }
  return ScheduleDirect(links, grid, slot, std::move(rbs), accumulated);
}

SlotSchedule ScheduleAccessSlot(const SectorLinks& links, ResourceGrid& grid, std::size_t slot,
                                std::vector<double>& accumulated) {
  if (ResourceGrid::Role(slot) != SlotRole::ACCESS) {
    throw ContractViolation("ScheduleAccessSlot needs an access slot");
  }
  for (const GatewayLink& g : links.gateways) {
    if (g.servedMtcds.empty()) {
      continue;
    }
    const std::size_t k = std::min(g.reservedRbs, grid.NumRbs());
    for (std::size_t rb = 0; rb < k; ++rb) {
      grid.Assign(slot, rb, {LinkKind::MTCG_MTCD, g.mtcg, g.servedMtcds[rb % g.servedMtcds.size()], g.mtcgPowerDbm});
    }
  }
  std::vector<std::size_t> rbs(grid.NumRbs());
  for (std::size_t rb = 0; rb < rbs.size(); ++rb) {
    rbs[rb] = rb;
  }
  return ScheduleDirect(links, grid, slot, std::move(rbs), accumulated);
}

}  // namespace m2m
