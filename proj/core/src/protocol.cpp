#include "multitree/protocol.hpp"

namespace multitree {

const char* to_string(Rule r) {
  switch (r) {
    case Rule::kNone: return "none";
    case Rule::kAdd: return "add";
    case Rule::kInsert: return "insert";
    case Rule::kJump: return "jump";
    case Rule::kLeafSwap: return "leafswap";
    case Rule::kMixSwap: return "mixswap";
  }
  return "?";
}

Depth read_depth(const GraphState& state, NodeId u, Color i, DepthMode mode) {
  return mode == DepthMode::kInstantaneous ? state.true_depth(u, i)
                                           : state.buffered_depth(u, i);
}

void depth_update(GraphState& state, NodeId u, Color i, DepthMode mode) {
  if (u == state.root_of(i)) {
    state.set_buffered_depth(u, i, Depth::finite(0));
    return;
  }
  if (mode == DepthMode::kInstantaneous) {
    state.set_buffered_depth(u, i, state.true_depth(u, i));
    return;
  }
  auto p = state.tree_parent(u, i);
  state.set_buffered_depth(
      u, i, p ? state.buffered_depth(*p, i).next() : Depth::infinite());
}

void depth_update_all(GraphState& state, NodeId u, DepthMode mode) {
  for (Color i = 1; i <= state.m(); ++i) depth_update(state, u, i, mode);
}

void refresh_all_depths(GraphState& state) {
  for (Color i = 1; i <= state.m(); ++i) {
    auto depths = state.true_depths(i);
    for (NodeId u = 1; u <= state.n(); ++u)
      state.set_buffered_depth(u, i, depths[u - 1]);
  }
}

std::optional<Action> plan_greedy_cover(const GraphState& state, NodeId u, NodeId v) {
  if (state.incoming_count(u) >= state.k()) return std::nullopt;
  const bool target_open = state.out_degree(v) < state.cap(v);
  const bool sampler_open = state.out_degree(u) < state.cap(u);
  if (!target_open && !sampler_open) return std::nullopt;

  for (Color i = 1; i <= state.m(); ++i) {
    if (state.has_incoming(u, i) || !state.has_incoming(v, i)) continue;
    if (target_open) {
      Action a;
      a.rule = Rule::kAdd;
      a.make(i, v, u);
      return a;
    }
    // target saturated: u takes over one of its children (lowest id), which
    // costs u an outgoing slot, so u needs spare capacity of its own
    if (!sampler_open) continue;
    const auto& kids = state.children(v, i);
    if (kids.empty()) continue;
    Action a;
    a.rule = Rule::kInsert;
    a.drop(i, v, kids.front());
    a.make(i, v, u);
    a.make(i, u, kids.front());
    return a;
  }
  return std::nullopt;
}

std::optional<Action> plan_single_tree_balance(const GraphState& state, NodeId u,
                                               NodeId v, DepthMode mode) {
  for (Color i = 1; i <= state.m(); ++i) {
    if (!state.has_incoming(u, i) || !state.has_incoming(v, i)) continue;
    auto up = state.tree_parent(u, i);
    if (!up) continue;  // u's feed here is the server; it never re-parents
    Depth du = read_depth(state, u, i, mode);
    Depth dv = read_depth(state, v, i, mode);

    // jump beats leaf swap when both would fire
    if (state.out_degree(v) < state.cap(v) && dv.next() < du && v != *up) {
      Action a;
      a.rule = Rule::kJump;
      a.drop(i, *up, u);
      a.make(i, v, u);
      return a;
    }

    if (state.child_count(v, i) == 0 && state.child_count(u, i) > 0 && du > dv) {
      auto vp = state.tree_parent(v, i);
      // needs both parents removable, distinct (same parent would rebuild the
      // identical links), and not the degenerate v-under-u case that would
      // self-loop; the latter two only arise from stale buffered depths
      if (!vp || *vp == *up || *vp == u) continue;
      Action a;
      a.rule = Rule::kLeafSwap;
      a.drop(i, *up, u);
      a.drop(i, *vp, v);
      a.make(i, *up, v);
      a.make(i, *vp, u);
      return a;
    }
  }
  return std::nullopt;
}

std::optional<Action> plan_mix_swap(const GraphState& state, NodeId s, NodeId t,
                                    DepthMode mode) {
  for (Color i = 1; i <= state.m(); ++i) {
    auto p_opt = state.tree_parent(s, i);
    if (!p_opt || *p_opt == t) continue;
    NodeId p = *p_opt;
    Depth pi = read_depth(state, p, i, mode);
    Depth ti = read_depth(state, t, i, mode);
    if (pi < ti) continue;

    for (Color j = 1; j <= state.m(); ++j) {
      if (j == i) continue;
      const auto& kids = state.children(t, j);
      if (kids.empty()) continue;
      NodeId c = kids.front();  // lowest id; skip p itself (would self-loop)
      if (c == p) {
        if (kids.size() < 2) continue;
        c = kids[1];
      }
      Depth pj = read_depth(state, p, j, mode);
      Depth tj = read_depth(state, t, j, mode);
      if (pj > tj) continue;

      MixClause clause = MixClause::kStrict;
      if (pi == ti && pj == tj) {
        // all-equal tie: only swap along the index ordering, so repeated
        // swaps cannot ping-pong
        auto sgn = (static_cast<std::int64_t>(p) - static_cast<std::int64_t>(t)) *
                   (static_cast<std::int64_t>(j) - static_cast<std::int64_t>(i));
        if (sgn <= 0) continue;
        clause = MixClause::kTie;
      }
      Action a;
      a.rule = Rule::kMixSwap;
      a.clause = clause;
      a.drop(i, p, s);
      a.drop(j, t, c);
      a.make(j, p, c);
      a.make(i, t, s);
      return a;
    }
  }
  return std::nullopt;
}

std::optional<Action> plan_update(const GraphState& state, NodeId u, NodeId v,
                                  DepthMode mode) {
  detail::require(u != v, "sampler equals target");
  if (auto a = plan_greedy_cover(state, u, v)) return a;
  if (auto a = plan_single_tree_balance(state, u, v, mode)) return a;
  return plan_mix_swap(state, u, v, mode);
}

void apply_action(GraphState& state, const Action& a, DepthMode mode) {
  for (std::uint8_t r = 0; r < a.n_removed; ++r)
    state.remove_link(a.removed[r].parent, a.removed[r].child, a.removed[r].color);
  for (std::uint8_t b = 0; b < a.n_built; ++b)
    state.build_link(a.built[b].parent, a.built[b].child, a.built[b].color);
  // re-parented nodes refresh the affected color right away, in build order,
  // so a distributed insert's displaced child reads its new parent's fresh value
  for (std::uint8_t d = 0; d < a.n_refreshed; ++d)
    depth_update(state, a.refreshed[d].first, a.refreshed[d].second, mode);
}

namespace {
bool run_plan(GraphState& state, const std::optional<Action>& plan, DepthMode mode) {
  if (!plan) return false;
  apply_action(state, *plan, mode);
  return true;
}
}  // namespace

bool greedy_cover(GraphState& state, NodeId u, NodeId v) {
  return run_plan(state, plan_greedy_cover(state, u, v), DepthMode::kInstantaneous);
}

bool single_tree_balance(GraphState& state, NodeId u, NodeId v, DepthMode mode) {
  return run_plan(state, plan_single_tree_balance(state, u, v, mode), mode);
}

bool mix_swap(GraphState& state, NodeId u, NodeId v, DepthMode mode) {
  return run_plan(state, plan_mix_swap(state, u, v, mode), mode);
}

RuleOutcome on_sample(GraphState& state, NodeId sampler, NodeId target,
                      DepthMode mode) {
  detail::require(sampler != target, "sampler equals target");
  depth_update_all(state, sampler, mode);
  depth_update_all(state, target, mode);

  RuleOutcome out;
  if (auto plan = plan_update(state, sampler, target, mode)) {
    apply_action(state, *plan, mode);
    out.changed = true;
    out.rule = plan->rule;
    out.clause = plan->clause;
    out.removed = plan->removed;
    out.built = plan->built;
    out.n_removed = plan->n_removed;
    out.n_built = plan->n_built;
  }
  return out;
}

}  // namespace multitree
