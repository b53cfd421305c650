#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "m2msim/rng.hpp"
#include "m2msim/types.hpp"

namespace m2m {

class ChannelState;

/// An active MTCD-to-MTCD link; one vertex of the interference graph.
struct MtcdPair {
  NodeId tx = 0;
  NodeId rx = 0;

  friend bool operator==(const MtcdPair&, const MtcdPair&) = default;
};

struct InterferenceGraph {
  std::vector<MtcdPair> vertices;
  std::vector<std::vector<std::size_t>> adjacency;  // sorted neighbour lists
  double thresholdDb = 30.0;

  std::size_t NumVertices() const { return vertices.size(); }
  std::size_t NumEdges() const;
  std::size_t Degree(std::size_t v) const { return adjacency[v].size(); }
  std::size_t MaxDegree() const;
  bool HasEdge(std::size_t u, std::size_t v) const;
  void AddEdge(std::size_t u, std::size_t v);

  /// Graph with `n` vertices and no edges; vertices get placeholder pairs.
  static InterferenceGraph Empty(std::size_t n);
  /// Adjacency-list text: one "v tx rx : n1 n2 ..." line per vertex.
  void Write(std::ostream& out) const;
};

using LinkGainFn = std::function<double(NodeId tx, NodeId rx)>;

/**
 * Edge (u, v) when, for either direction, the serving gain of the victim pair
 * exceeds the cross gain from the other pair's transmitter by less than
 * `thresholdDb`.
 */
InterferenceGraph BuildInterferenceGraph(std::span<const MtcdPair> pairs, const LinkGainFn& gainDb, double thresholdDb);
InterferenceGraph BuildInterferenceGraph(std::span<const MtcdPair> pairs, const ChannelState& channel,
                                         double thresholdDb);

/// Subchannels (colours 0..numColors-1) held by each vertex, kept sorted.
struct ColoringState {
  std::size_t numColors = 0;
  std::vector<std::vector<int>> held;
  std::vector<double> activationProb;

  friend bool operator==(const ColoringState&, const ColoringState&) = default;
};

struct ConflictCount {
  std::size_t incidences = 0;  // sum over edges of shared colours
  std::size_t edges = 0;       // edges sharing at least one colour
};

ConflictCount CountConflicts(const InterferenceGraph& graph, const ColoringState& state);

struct ColoringParams {
  std::size_t numColors = 2;
  std::size_t iterations = 50;
  double p0 = 0.5;
  /// Probability that a vertex whose colour is not conflict-minimal moves in a round.
  double moveProbability = 0.8;
};

/**
 * One conflict-minimisation move of `vertex` against the published colours.
 * Each held colour is re-chosen among the colours (not otherwise held) with the
 * fewest neighbours holding them. A colour that is already minimal is kept;
 * otherwise the vertex moves with probability moveProbability to a uniformly
 * random minimiser.
 */
std::vector<int> LocalColorStep(std::size_t vertex, const InterferenceGraph& graph, const ColoringState& published,
                                Rng& rng, double moveProbability = 1.0);

/// True when every held colour of `vertex` is already conflict-minimal.
bool IsLocallyStable(std::size_t vertex, const InterferenceGraph& graph, const ColoringState& published);

/// p0 * (1 - degree / (maxDegree + 1)) * (1 - held / numColors)
double ActivationProbability(double p0, std::size_t degree, std::size_t maxDegree, std::size_t held,
                             std::size_t numColors);

/// Draws against the activation probability and, on success, returns the
/// conflict-minimising colour to add (ties uniform).
std::optional<int> MaybeActivateExtraChannel(std::size_t vertex, const InterferenceGraph& graph,
                                             const ColoringState& published, double p0, Rng& rng);

struct RoundTrace {
  std::size_t round = 0;
  ConflictCount conflicts;  // after the conflict-minimisation phase
  std::size_t moved = 0;
  std::size_t activations = 0;
};

struct ColoringResult {
  ColoringState state;      // final
  ColoringState bestState;  // round with the fewest conflict incidences
  ConflictCount conflicts;  // of the final state
  ConflictCount bestConflicts;
  std::vector<RoundTrace> trace;
};

/**
 * Synchronous distributed colouring. Every round all vertices step against a
 * frozen snapshot, then publish, then may activate one more subchannel. Stops
 * after `iterations` rounds or once a round changes nothing while every
 * vertex is locally stable. Vertex randomness is derived from (seed, round,
 * vertex), so the OpenMP kernel and the serial reference agree exactly.
 */
ColoringResult RunDistributedColoring(const InterferenceGraph& graph, const ColoringParams& params,
                                      std::uint64_t seed);
ColoringResult RunDistributedColoringSerial(const InterferenceGraph& graph, const ColoringParams& params,
                                            std::uint64_t seed);

/// Baseline: every pair holds every subchannel.
ColoringState FullReuseAssign(std::size_t numPairs, std::size_t numColors);

/// CSV: round,conflict_incidences,conflicting_edges,moved,activations
void WriteColoringTrace(std::ostream& out, std::span<const RoundTrace> trace);

}  // namespace m2m
