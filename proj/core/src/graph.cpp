#include "multitree/graph.hpp"

#include <algorithm>
#include <deque>

namespace multitree {

GraphState::GraphState(std::uint32_t n, std::uint32_t m, std::uint32_t k,
                       std::vector<std::uint32_t> caps)
    : n_(n), m_(m), k_(k) {
  detail::require(n >= 1, "need at least one node");
  detail::require(m >= 1 && m <= n, "color count must be in [1, n]");
  detail::require(k >= 1 && k <= m, "required cover must be in [1, m]");
  detail::require(caps.size() == n, "one cap per node");

  nodes_.resize(n);
  for (NodeId u = 1; u <= n; ++u) {
    NodeState& s = nodes_[u - 1];
    s.id = u;
    s.cap = caps[u - 1];
    s.parent.assign(m, std::nullopt);
    s.children.assign(m, {});
    s.buffered.assign(m, Depth::infinite());
  }
  // roots are born holding their own color at depth 0
  for (Color i = 1; i <= m; ++i) {
    NodeState& r = nodes_[i - 1];
    r.parent[i - 1] = kServer;
    r.buffered[i - 1] = Depth::finite(0);
    r.in_count = 1;
  }
}

void GraphState::build_link(NodeId u, NodeId v, Color i) {
  detail::require(i >= 1 && i <= m_, "color out of range");
  NodeState& from = nodes_[index(u)];
  NodeState& to = nodes_[index(v)];
  detail::require(u != v, "self loop");
  detail::require(!to.parent[i - 1].has_value(), "child already has this color");
  detail::require(from.out_degree < from.cap, "parent out of capacity");

  auto& kids = from.children[i - 1];
  kids.insert(std::lower_bound(kids.begin(), kids.end(), v), v);
  to.parent[i - 1] = u;
  ++from.out_degree;
  ++to.in_count;
  ++edges_;
}

void GraphState::remove_link(NodeId u, NodeId v, Color i) {
  detail::require(i >= 1 && i <= m_, "color out of range");
  NodeState& from = nodes_[index(u)];
  NodeState& to = nodes_[index(v)];
  detail::require(to.parent[i - 1].has_value() && *to.parent[i - 1] == u,
                  "no such link");

  auto& kids = from.children[i - 1];
  auto it = std::lower_bound(kids.begin(), kids.end(), v);
  detail::require(it != kids.end() && *it == v, "child list out of sync");
  kids.erase(it);
  to.parent[i - 1].reset();
  --from.out_degree;
  --to.in_count;
  --edges_;
}

Depth GraphState::true_depth(NodeId u, Color i) const {
  detail::require(i >= 1 && i <= m_, "color out of range");
  NodeId cur = u;
  // a simple path to the root has at most n-1 hops; running past that means
  // the walk entered a cycle
  for (std::uint32_t steps = 0; steps <= n_; ++steps) {
    if (cur == root_of(i)) return Depth::finite(steps);
    auto p = node(cur).parent[i - 1];
    if (!p) return Depth::infinite();
    cur = *p;  // never kServer here: only the root carries it, caught above
  }
  return Depth::infinite();
}

std::vector<Depth> GraphState::true_depths(Color i) const {
  detail::require(i >= 1 && i <= m_, "color out of range");
  std::vector<Depth> depth(n_, Depth::infinite());
  std::deque<NodeId> queue;
  depth[root_of(i) - 1] = Depth::finite(0);
  queue.push_back(root_of(i));
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    Depth next = depth[u - 1].next();
    for (NodeId c : children(u, i)) {
      if (!depth[c - 1].is_infinite()) continue;  // in-degree 1 makes this dead code, kept as guard
      depth[c - 1] = next;
      queue.push_back(c);
    }
  }
  return depth;
}

AssumptionReport GraphState::check_assumption1() const {
  AssumptionReport report;
  auto flag = [&](AssumptionViolation::Kind kind, NodeId node, Color color,
                  std::string detail) {
    report.violations.push_back({kind, node, color, std::move(detail)});
  };

  for (NodeId u = 1; u <= n_; ++u) {
    const NodeState& s = nodes_[u - 1];
    std::uint32_t out = 0;
    std::uint32_t in = 0;
    for (Color i = 1; i <= m_; ++i) {
      const auto& kids = s.children[i - 1];
      out += static_cast<std::uint32_t>(kids.size());
      for (std::size_t j = 0; j < kids.size(); ++j) {
        if (j > 0 && kids[j] == kids[j - 1])
          flag(AssumptionViolation::Kind::kDuplicateChild, u, i,
               "child " + std::to_string(kids[j]) + " listed twice");
        const auto& back = nodes_[index(kids[j])].parent[i - 1];
        if (!back || *back != u)
          flag(AssumptionViolation::Kind::kSymmetryBroken, u, i,
               "child " + std::to_string(kids[j]) + " does not point back");
      }
      if (s.parent[i - 1]) {
        ++in;
        NodeId p = *s.parent[i - 1];
        if (p == kServer) {
          if (!is_root(u) || i != u)
            flag(AssumptionViolation::Kind::kSymmetryBroken, u, i,
                 "server feed on a non-root color");
        } else {
          const auto& siblings = nodes_[index(p)].children[i - 1];
          if (!std::binary_search(siblings.begin(), siblings.end(), u))
            flag(AssumptionViolation::Kind::kSymmetryBroken, u, i,
                 "parent " + std::to_string(p) + " does not list this child");
        }
      }
    }
    if (is_root(u)) {
      const auto& own = s.parent[u - 1];
      if (!own || *own != kServer)
        flag(AssumptionViolation::Kind::kRootFeedMissing, u, u, "");
    }
    if (in > k_)
      flag(AssumptionViolation::Kind::kTooManyIncoming, u, 0,
           std::to_string(in) + " feeds, cover requirement is " + std::to_string(k_));
    if (out > s.cap)
      flag(AssumptionViolation::Kind::kOutDegreeOverCap, u, 0,
           std::to_string(out) + " children against cap " + std::to_string(s.cap));
    if (out != s.out_degree || in != s.in_count)
      flag(AssumptionViolation::Kind::kCacheMismatch, u, 0, "degree counters drifted");
  }

  // the part of each color reachable from its root must be a tree; with the
  // symmetry checks above this can only fire if a child list lies
  for (Color i = 1; i <= m_; ++i) {
    std::vector<char> seen(n_, 0);
    std::deque<NodeId> queue{root_of(i)};
    seen[root_of(i) - 1] = 1;
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop_front();
      for (NodeId c : children(u, i)) {
        if (seen[c - 1]) {
          flag(AssumptionViolation::Kind::kNotATree, c, i, "reached twice from root");
          continue;
        }
        seen[c - 1] = 1;
        queue.push_back(c);
      }
    }
  }
  return report;
}

std::vector<std::vector<NodeId>> GraphState::detect_cycles(Color i) const {
  detail::require(i >= 1 && i <= m_, "color out of range");
  std::vector<std::vector<NodeId>> cycles;
  // 0 = untouched, 1 = on the current walk, 2 = settled
  std::vector<std::uint8_t> mark(n_ + 1, 0);
  std::vector<std::uint32_t> pos(n_ + 1, 0);
  std::vector<NodeId> path;

  for (NodeId start = 1; start <= n_; ++start) {
    if (mark[start] != 0) continue;
    path.clear();
    NodeId cur = start;
    while (true) {
      if (cur == root_of(i) || mark[cur] == 2) break;
      if (mark[cur] == 1) {
        // the walk bit its own tail; everything from the first visit of cur
        // onwards is the cycle
        cycles.emplace_back(path.begin() + pos[cur], path.end());
        break;
      }
      mark[cur] = 1;
      pos[cur] = static_cast<std::uint32_t>(path.size());
      path.push_back(cur);
      auto p = node(cur).parent[i - 1];
      if (!p) break;
      cur = *p;
    }
    for (NodeId v : path) mark[v] = 2;
  }
  return cycles;
}

}  // namespace multitree
