#include "m2msim/graphalloc.hpp"

#include <algorithm>

#include "m2msim/channel.hpp"
#include "m2msim/errors.hpp"

namespace m2m {

namespace {

// Seed streams inside one colouring run.
constexpr std::uint64_t kInitStream = 0;
std::uint64_t StepStream(std::size_t round) { return 2 * round + 1; }
std::uint64_t ActivationStream(std::size_t round) { return 2 * round + 2; }

std::vector<int> NeighbourColorCounts(std::size_t vertex, const InterferenceGraph& graph,
                                      const ColoringState& published) {
  std::vector<int> counts(published.numColors, 0);
  for (std::size_t u : graph.adjacency[vertex]) {
    for (int c : published.held[u]) {
      ++counts[c];
    }
  }
  return counts;
}

// Colours with the fewest neighbour holders, skipping those in `excluded`.
std::vector<int> Minimisers(const std::vector<int>& counts, const std::vector<int>& excluded) {
  std::vector<int> best;
  int bestCount = 0;
  for (int c = 0; c < static_cast<int>(counts.size()); ++c) {
    if (std::find(excluded.begin(), excluded.end(), c) != excluded.end()) {
      continue;
    }
    if (best.empty() || counts[c] < bestCount) {
      best.assign(1, c);
      bestCount = counts[c];
    } else if (counts[c] == bestCount) {
      best.push_back(c);
    }
  }
  return best;
}

int PickUniform(const std::vector<int>& options, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
  return options[pick(rng)];
}

ColoringState InitialState(const InterferenceGraph& graph, const ColoringParams& params, std::uint64_t seed) {
  if (params.numColors == 0) {
    throw ConfigError("colouring needs at least one colour");
  }
  if (params.iterations == 0) {
    throw ConfigError("colouring needs at least one iteration");
  }
  ColoringState state;
  state.numColors = params.numColors;
  state.held.resize(graph.NumVertices());
  state.activationProb.assign(graph.NumVertices(), 0.0);
  for (std::size_t v = 0; v < graph.NumVertices(); ++v) {
    Rng rng(DeriveSeed(seed, kInitStream, v));
    std::uniform_int_distribution<int> color(0, static_cast<int>(params.numColors) - 1);
    state.held[v] = {color(rng)};
  }
  return state;
}

void StepVertex(std::size_t v, const InterferenceGraph& graph, const ColoringState& snapshot, ColoringState& next,
                const ColoringParams& params, std::uint64_t seed, std::size_t round) {
  Rng rng(DeriveSeed(seed, StepStream(round), v));
  next.held[v] = LocalColorStep(v, graph, snapshot, rng, params.moveProbability);
}

void ActivateVertex(std::size_t v, const InterferenceGraph& graph, const ColoringState& published,
                    ColoringState& next, const ColoringParams& params, std::uint64_t seed, std::size_t round) {
  Rng rng(DeriveSeed(seed, ActivationStream(round), v));
  next.activationProb[v] = ActivationProbability(params.p0, graph.Degree(v), graph.MaxDegree(),
                                                 published.held[v].size(), published.numColors);
  if (const auto extra = MaybeActivateExtraChannel(v, graph, published, params.p0, rng)) {
    auto& held = next.held[v];
    held.insert(std::upper_bound(held.begin(), held.end(), *extra), *extra);
  }
}

template <bool kParallel>
ColoringResult RunColoring(const InterferenceGraph& graph, const ColoringParams& params, std::uint64_t seed) {
  ColoringResult result;
  ColoringState state = InitialState(graph, params, seed);
  const auto n = static_cast<std::ptrdiff_t>(graph.NumVertices());
  bool haveBest = false;
  for (std::size_t round = 1; round <= params.iterations; ++round) {
    const ColoringState snapshot = state;
#pragma omp parallel for schedule(static) if (kParallel)
    for (std::ptrdiff_t v = 0; v < n; ++v) {
      StepVertex(static_cast<std::size_t>(v), graph, snapshot, state, params, seed, round);
    }
    RoundTrace trace;
    trace.round = round;
    for (std::ptrdiff_t v = 0; v < n; ++v) {
      trace.moved += state.held[v] != snapshot.held[v] ? 1 : 0;
    }
    trace.conflicts = CountConflicts(graph, state);
    if (!haveBest || trace.conflicts.incidences < result.bestConflicts.incidences) {
      result.bestState = state;
      result.bestConflicts = trace.conflicts;
      haveBest = true;
    }

    const ColoringState published = state;
#pragma omp parallel for schedule(static) if (kParallel)
    for (std::ptrdiff_t v = 0; v < n; ++v) {
      ActivateVertex(static_cast<std::size_t>(v), graph, published, state, params, seed, round);
    }
    for (std::ptrdiff_t v = 0; v < n; ++v) {
      trace.activations += state.held[v].size() - published.held[v].size();
    }
    result.trace.push_back(trace);

    if (trace.moved == 0 && trace.activations == 0) {
      bool stable = true;
      for (std::ptrdiff_t v = 0; v < n && stable; ++v) {
        stable = IsLocallyStable(static_cast<std::size_t>(v), graph, state);
      }
      if (stable) {
        break;
      }
    }
  }
  result.conflicts = CountConflicts(graph, state);
  result.state = std::move(state);
  if (!haveBest) {
    result.bestState = result.state;
    result.bestConflicts = result.conflicts;
  }
  return result;
}

}  // namespace

std::size_t InterferenceGraph::NumEdges() const {
  std::size_t sum = 0;
  for (const auto& adj : adjacency) {
    sum += adj.size();
  }
  return sum / 2;
}

std::size_t InterferenceGraph::MaxDegree() const {
  std::size_t best = 0;
  for (const auto& adj : adjacency) {
    best = std::max(best, adj.size());
  }
  return best;
}

bool InterferenceGraph::HasEdge(std::size_t u, std::size_t v) const {
  return std::binary_search(adjacency[u].begin(), adjacency[u].end(), v);
}

void InterferenceGraph::AddEdge(std::size_t u, std::size_t v) {
  if (u == v || HasEdge(u, v)) {
    return;
  }
  adjacency[u].insert(std::upper_bound(adjacency[u].begin(), adjacency[u].end(), v), v);
  adjacency[v].insert(std::upper_bound(adjacency[v].begin(), adjacency[v].end(), u), u);
}

InterferenceGraph InterferenceGraph::Empty(std::size_t n) {
  InterferenceGraph g;
  g.vertices.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    g.vertices[v] = {static_cast<NodeId>(2 * v), static_cast<NodeId>(2 * v + 1)};
  }
  g.adjacency.resize(n);
  return g;
}

void InterferenceGraph::Write(std::ostream& out) const {
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    out << v << ' ' << vertices[v].tx << ' ' << vertices[v].rx << " :";
    for (std::size_t u : adjacency[v]) {
      out << ' ' << u;
    }
    out << '\n';
  }
}

InterferenceGraph BuildInterferenceGraph(std::span<const MtcdPair> pairs, const LinkGainFn& gainDb,
                                         double thresholdDb) {
  InterferenceGraph graph;
  graph.vertices.assign(pairs.begin(), pairs.end());
  graph.adjacency.resize(pairs.size());
  graph.thresholdDb = thresholdDb;
  std::vector<double> serving(pairs.size());
  for (std::size_t v = 0; v < pairs.size(); ++v) {
    serving[v] = gainDb(pairs[v].tx, pairs[v].rx);
  }
  for (std::size_t u = 0; u < pairs.size(); ++u) {
    for (std::size_t v = u + 1; v < pairs.size(); ++v) {
      const double marginAtV = serving[v] - gainDb(pairs[u].tx, pairs[v].rx);
      const double marginAtU = serving[u] - gainDb(pairs[v].tx, pairs[u].rx);
      if (std::min(marginAtU, marginAtV) < thresholdDb) {
        graph.AddEdge(u, v);
      }
    }
  }
  return graph;
}

InterferenceGraph BuildInterferenceGraph(std::span<const MtcdPair> pairs, const ChannelState& channel,
                                         double thresholdDb) {
  return BuildInterferenceGraph(
      pairs, [&channel](NodeId tx, NodeId rx) { return channel.DeviceGainDb(tx, rx); }, thresholdDb);
}

ConflictCount CountConflicts(const InterferenceGraph& graph, const ColoringState& state) {
  ConflictCount count;
  for (std::size_t u = 0; u < graph.NumVertices(); ++u) {
    for (std::size_t v : graph.adjacency[u]) {
      if (v <= u) {
        continue;
      }
      std::size_t shared = 0;
      const auto& a = state.held[u];
      const auto& b = state.held[v];
      auto ia = a.begin();
      auto ib = b.begin();
      while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
          ++ia;
        } else if (*ib < *ia) {
          ++ib;
        } else {
          ++shared;
          ++ia;
          ++ib;
        }
      }
      count.incidences += shared;
      count.edges += shared > 0 ? 1 : 0;
    }
  }
  return count;
}

std::vector<int> LocalColorStep(std::size_t vertex, const InterferenceGraph& graph, const ColoringState& published,
                                Rng& rng, double moveProbability) {
  const std::vector<int> counts = NeighbourColorCounts(vertex, graph, published);
  std::vector<int> held = published.held[vertex];
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t slot = 0; slot < held.size(); ++slot) {
    std::vector<int> others = held;
    others.erase(others.begin() + static_cast<std::ptrdiff_t>(slot));
    const std::vector<int> best = Minimisers(counts, others);
    if (std::find(best.begin(), best.end(), held[slot]) != best.end()) {
      continue;
    }
    if (unit(rng) < moveProbability) {
      held[slot] = PickUniform(best, rng);
    }
  }
  std::sort(held.begin(), held.end());
  return held;
}

bool IsLocallyStable(std::size_t vertex, const InterferenceGraph& graph, const ColoringState& published) {
  const std::vector<int> counts = NeighbourColorCounts(vertex, graph, published);
  const auto& held = published.held[vertex];
  for (std::size_t slot = 0; slot < held.size(); ++slot) {
    std::vector<int> others = held;
    others.erase(others.begin() + static_cast<std::ptrdiff_t>(slot));
    const std::vector<int> best = Minimisers(counts, others);
    if (std::find(best.begin(), best.end(), held[slot]) == best.end()) {
      return false;
    }
  }
  return true;
}

double ActivationProbability(double p0, std::size_t degree, std::size_t maxDegree, std::size_t held,
                             std::size_t numColors) {
  if (numColors == 0 || held >= numColors) {
    return 0.0;
  }
  const double degreeFactor = 1.0 - static_cast<double>(degree) / static_cast<double>(maxDegree + 1);
  const double resourceFactor = 1.0 - static_cast<double>(held) / static_cast<double>(numColors);
  return p0 * degreeFactor * resourceFactor;
}

std::optional<int> MaybeActivateExtraChannel(std::size_t vertex, const InterferenceGraph& graph,
                                             const ColoringState& published, double p0, Rng& rng) {
  const double p = ActivationProbability(p0, graph.Degree(vertex), graph.MaxDegree(),
                                         published.held[vertex].size(), published.numColors);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (!(unit(rng) < p)) {
    return std::nullopt;
  }
  const std::vector<int> best =
      Minimisers(NeighbourColorCounts(vertex, graph, published), published.held[vertex]);
  if (best.empty()) {
    return std::nullopt;
  }
  return PickUniform(best, rng);
}

ColoringResult RunDistributedColoring(const InterferenceGraph& graph, const ColoringParams& params,
                                      std::uint64_t seed) {
  return RunColoring<true>(graph, params, seed);
}

ColoringResult RunDistributedColoringSerial(const InterferenceGraph& graph, const ColoringParams& params,
                                            std::uint64_t seed) {
  return RunColoring<false>(graph, params, seed);
}

ColoringState FullReuseAssign(std::size_t numPairs, std::size_t numColors) {
  ColoringState state;
  state.numColors = numColors;
  std::vector<int> all(numColors);
  for (std::size_t c = 0; c < numColors; ++c) {
    all[c] = static_cast<int>(c);
  }
  state.held.assign(numPairs, all);
  state.activationProb.assign(numPairs, 0.0);
  return state;
}

void WriteColoringTrace(std::ostream& out, std::span<const RoundTrace> trace) {
  out << "round,conflict_incidences,conflicting_edges,moved,activations\n";
  for (const RoundTrace& t : trace) {
    out << t.round << ',' << t.conflicts.incidences << ',' << t.conflicts.edges << ',' << t.moved << ','
        << t.activations << '\n';
  }
}

}  // namespace m2m
