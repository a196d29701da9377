#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multitree/graph.hpp"
#include "multitree/protocol.hpp"

namespace multitree {

// Lexicographic progress measure (-|E|, Y, -S): every firing rule either
// grows the link count, or shrinks the clamped depth sum Y, or (index-tie
// mix swaps only) grows the weighted link sum S.
struct PotentialTriple {
  std::uint64_t edges = 0;
  std::uint64_t y = 0;  // sum over nodes and colors of min(true depth, N)
  std::uint64_t s = 0;  // sum over links (color i, parent u, child) of u * i
  friend bool operator==(const PotentialTriple&, const PotentialTriple&) = default;
};
PotentialTriple potential(const GraphState& state);
// strictly better after than before, in the lexicographic order above
bool potential_improved(const PotentialTriple& before, const PotentialTriple& after);

// Fully covered = reachable from at least K roots, by true depths. Coverage
// is ground truth regardless of depth mode.
std::uint32_t covered_count(const GraphState& state);
double fraction_fully_covered(const GraphState& state);

struct DepthReport {
  std::vector<std::uint32_t> max_depth;  // [color-1], over the root's tree
  std::vector<std::uint32_t> uncovered;  // [color-1], nodes not reached
  std::uint32_t overall_max = 0;
};
DepthReport tree_depths(const GraphState& state);

std::uint32_t cycle_count(const GraphState& state);  // summed over colors

// max |buffered - true| over pairs where both are finite
std::uint32_t buffered_depth_error(const GraphState& state);

struct MetricSample {
  double time = 0;
  double fraction_covered = 0;
  std::uint32_t max_depth = 0;
  std::uint64_t edges = 0;
  std::uint64_t y = 0;
  std::uint64_t s = 0;
  std::uint32_t cycles = 0;
  std::uint32_t buffered_error = 0;
  friend bool operator==(const MetricSample&, const MetricSample&) = default;
};
MetricSample measure(const GraphState& state, double time);
std::string metric_csv_header();
std::string metric_csv_row(const MetricSample& s);

// True iff no ordered pair could fire any rule, probing the same planners
// the simulation runs, after a full buffered-depth refresh in the given mode
// (the refreshed values are the BFS truth, which is the fixed point the
// per-sample updates converge to once the structure stops changing).
bool is_converged(const GraphState& state, DepthMode mode);

struct CheckWitness {
  std::string check;
  Color color = 0;
  std::vector<NodeId> nodes;
  std::string detail;
};

// Structural audit of a converged state:
//  coverage      every node reached by at least K trees
//  leaf_band     per color, leaf depths within the tree differ by at most 1
//  internals     per color, nodes 2+ above the bottom are saturated and keep
//                at least one child of that color
//  mixed_chain   per color pair, depth pairs of nodes forwarding both colors
//                line up in a strictly dominating chain
//  depth_bound   per color, max depth <= log2(N+1) + c with c measured as the
//                smallest truncation whose frontier reaches M leaves
struct ConvergedReport {
  bool contract_converged = false;  // the state was actually converged when audited
  bool coverage = false;
  bool leaf_band = false;
  bool internals = false;
  bool mixed_chain = false;
  bool depth_bound = false;
  std::vector<std::uint32_t> shower_constant;  // measured c per color
  std::vector<CheckWitness> witnesses;
  bool all_pass() const {
    return contract_converged && coverage && leaf_band && internals &&
           mixed_chain && depth_bound;
  }
};
ConvergedReport converged_state_report(const GraphState& state,
                                       DepthMode mode = DepthMode::kInstantaneous);

}  // namespace multitree
