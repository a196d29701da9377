#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "multitree/graph.hpp"

namespace multitree {

// What a rule is allowed to read when it needs a depth. Instantaneous mode
// reads the true hop distance; distributed mode reads the node's buffered
// value, which can be stale (and is how cycles sneak in).
enum class DepthMode { kInstantaneous, kDistributed };

enum class Rule : std::uint8_t { kNone, kAdd, kInsert, kJump, kLeafSwap, kMixSwap };

// Which mix-swap guard let the swap through: a strict depth improvement, or
// the all-equal tie broken by node/color indices.
enum class MixClause : std::uint8_t { kNone, kStrict, kTie };

const char* to_string(Rule r);

// A planned update: links to drop, links to build (applied in that order, so
// capacity freed by the removals is available to the builds), and the nodes
// whose buffered depth must refresh because they got a new parent.
struct Action {
  Rule rule = Rule::kNone;
  MixClause clause = MixClause::kNone;
  std::array<LinkRef, 2> removed{};
  std::array<LinkRef, 2> built{};
  std::uint8_t n_removed = 0;
  std::uint8_t n_built = 0;
  std::array<std::pair<NodeId, Color>, 2> refreshed{};
  std::uint8_t n_refreshed = 0;

  void drop(Color i, NodeId parent, NodeId child) {
    removed[n_removed++] = {i, parent, child};
  }
  void make(Color i, NodeId parent, NodeId child) {
    built[n_built++] = {i, parent, child};
    refreshed[n_refreshed++] = {child, i};
  }
  friend bool operator==(const Action&, const Action&) = default;
};

struct RuleOutcome {
  bool changed = false;
  Rule rule = Rule::kNone;
  MixClause clause = MixClause::kNone;
  std::array<LinkRef, 2> removed{};
  std::array<LinkRef, 2> built{};
  std::uint8_t n_removed = 0;
  std::uint8_t n_built = 0;
  friend bool operator==(const RuleOutcome&, const RuleOutcome&) = default;
};

Depth read_depth(const GraphState& state, NodeId u, Color i, DepthMode mode);

// One depth refresh for one color. Root's own color pins to 0; no feed pins
// to infinite; otherwise instantaneous mode recomputes the truth and
// distributed mode trusts the parent's buffered value plus one (inf + 1 = inf).
void depth_update(GraphState& state, NodeId u, Color i, DepthMode mode);
void depth_update_all(GraphState& state, NodeId u, DepthMode mode);

// buffered <- true depth for every node and color (the fixed point the
// per-sample refreshes settle into once the structure stops changing)
void refresh_all_depths(GraphState& state);

// Pure planners: decide whether the rule fires for the ordered pair (sampler
// u, target v) and return the exact link surgery. These double as the
// read-only probes the convergence oracle runs, so the mutating path and the
// predicate path cannot drift apart. Deterministic tie-breaks throughout:
// lowest color first, then lowest node id.
std::optional<Action> plan_greedy_cover(const GraphState& state, NodeId u, NodeId v);
std::optional<Action> plan_single_tree_balance(const GraphState& state, NodeId u,
                                               NodeId v, DepthMode mode);
std::optional<Action> plan_mix_swap(const GraphState& state, NodeId u, NodeId v,
                                    DepthMode mode);
// greedy, then single-tree, then mix; at most one fires
std::optional<Action> plan_update(const GraphState& state, NodeId u, NodeId v,
                                  DepthMode mode);

void apply_action(GraphState& state, const Action& action, DepthMode mode);

// Mutating forms; true iff the link set changed.
bool greedy_cover(GraphState& state, NodeId u, NodeId v);
bool single_tree_balance(GraphState& state, NodeId u, NodeId v, DepthMode mode);
bool mix_swap(GraphState& state, NodeId u, NodeId v, DepthMode mode);

// The full per-sample transform: both endpoints refresh all their buffered
// depths, then at most one structural update runs.
RuleOutcome on_sample(GraphState& state, NodeId sampler, NodeId target,
                      DepthMode mode);

}  // namespace multitree
