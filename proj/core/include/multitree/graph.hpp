#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace multitree {

using NodeId = std::uint32_t;  // 1-based, nodes are 1..N; node i <= M is the root of color i
using Color = std::uint32_t;   // 1-based, colors are 1..M

// Sentinel parent for a root's own color: the upstream server feed. It is not
// part of E, consumes no capacity anywhere, and is never removable.
inline constexpr NodeId kServer = 0;

namespace detail {
// Hard fault for API misuse. Composite transforms are written so they never
// trip these; tests rely on the throw to pin the contract.
constexpr void require(bool ok, const char* what) {
  if (!ok) throw std::logic_error(what);
}
}  // namespace detail

// Hop count within one color's tree. "Unreachable" is a real sentinel, not a
// big integer: inf + 1 == inf, and inf compares greater than every finite
// depth (the raw encoding as max uint32 makes default comparison do the
// right thing).
class Depth {
 public:
  constexpr Depth() = default;  // infinite
  static constexpr Depth finite(std::uint32_t hops) { return Depth(hops); }
  static constexpr Depth infinite() { return Depth(); }

  constexpr bool is_infinite() const { return raw_ == kInf; }
  constexpr std::uint32_t hops() const {
    detail::require(!is_infinite(), "Depth::hops on infinite depth");
    return raw_;
  }
  // inf + 1 == inf
  constexpr Depth next() const { return is_infinite() ? *this : Depth(raw_ + 1); }
  // min(depth, cap) with inf mapping to cap; used by the potential sum
  constexpr std::uint64_t clamp(std::uint64_t cap) const {
    return is_infinite() ? cap : std::min<std::uint64_t>(raw_, cap);
  }

  friend constexpr auto operator<=>(const Depth&, const Depth&) = default;

 private:
  static constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
  constexpr explicit Depth(std::uint32_t raw) : raw_(raw) {}
  std::uint32_t raw_ = kInf;
};

struct LinkRef {
  Color color = 0;
  NodeId parent = 0;
  NodeId child = 0;
  friend bool operator==(const LinkRef&, const LinkRef&) = default;
};

struct AssumptionViolation {
  enum class Kind {
    kTooManyIncoming,   // node holds more than K incoming feeds
    kOutDegreeOverCap,  // sum of children exceeds the node's cap
    kDuplicateChild,    // same child twice in one color's child list
    kSymmetryBroken,    // parent pointer and child list disagree
    kRootFeedMissing,   // root lost the server feed on its own color
    kCacheMismatch,     // cached degree counters drifted from the lists
    kNotATree,          // subgraph reachable from the root revisits a node
  };
  Kind kind;
  NodeId node = 0;
  Color color = 0;
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Per-node link state. children lists are kept sorted by id so that
// lowest-id tie-breaks are one lookup and serialization is canonical.
struct NodeState {
  NodeId id = 0;
  std::uint32_t cap = 0;                          // outgoing link budget
  std::vector<std::optional<NodeId>> parent;      // [color-1] -> parent, kServer on a root's own color
  std::vector<std::vector<NodeId>> children;      // [color-1] -> sorted child ids
  std::vector<Depth> buffered;                    // [color-1] -> depth the node believes it has
  std::uint32_t out_degree = 0;                   // cached total children
  std::uint32_t in_count = 0;                     // cached feeds held (server feed included)

  friend bool operator==(const NodeState&, const NodeState&) = default;
};

// Colored link state for N nodes and M colors. Wholly deterministic: equal
// construction plus equal operation sequences give operator== equal states,
// which the tests use as their round-trip oracle.
class GraphState {
 public:
  GraphState(std::uint32_t n, std::uint32_t m, std::uint32_t k,
             std::vector<std::uint32_t> caps);

  std::uint32_t n() const { return n_; }
  std::uint32_t m() const { return m_; }
  std::uint32_t k() const { return k_; }
  std::uint64_t edge_count() const { return edges_; }  // |E|; server feeds excluded

  bool is_root(NodeId u) const { return u >= 1 && u <= m_; }
  NodeId root_of(Color i) const { return i; }

  const NodeState& node(NodeId u) const { return nodes_[index(u)]; }
  std::uint32_t cap(NodeId u) const { return node(u).cap; }
  std::uint32_t out_degree(NodeId u) const { return node(u).out_degree; }
  std::uint32_t incoming_count(NodeId u) const { return node(u).in_count; }

  // any feed, server included
  bool has_incoming(NodeId u, Color i) const { return parent(u, i).has_value(); }
  std::optional<NodeId> parent(NodeId u, Color i) const {
    return node(u).parent[i - 1];
  }
  // only a real in-E parent (nullopt for a root's own color)
  std::optional<NodeId> tree_parent(NodeId u, Color i) const {
    auto p = parent(u, i);
    if (p && *p == kServer) return std::nullopt;
    return p;
  }
  const std::vector<NodeId>& children(NodeId u, Color i) const {
    return node(u).children[i - 1];
  }
  std::uint32_t child_count(NodeId u, Color i) const {
    return static_cast<std::uint32_t>(children(u, i).size());
  }

  Depth buffered_depth(NodeId u, Color i) const { return node(u).buffered[i - 1]; }
  void set_buffered_depth(NodeId u, Color i, Depth d) {
    nodes_[index(u)].buffered[i - 1] = d;
  }

  // Primitive link edits. Hard fault on misuse (self loop, double parent,
  // capacity overflow, removing a missing link). They do not touch buffered
  // depths; depth refresh is the protocol layer's job.
  void build_link(NodeId u, NodeId v, Color i);
  void remove_link(NodeId u, NodeId v, Color i);

  // True hop distance from root i, by walking the (unique) parent chain.
  // Returns infinite for detached or cycle-bound nodes.
  Depth true_depth(NodeId u, Color i) const;
  // Same truth computed the other way: BFS down from the root. [u-1] indexed.
  // Kept as the independent oracle the tests cross-check against.
  std::vector<Depth> true_depths(Color i) const;

  AssumptionReport check_assumption1() const;

  // Directed cycles in color i live entirely outside the root's tree; with
  // per-color in-degree <= 1 they are disjoint, found by pointer chasing.
  std::vector<std::vector<NodeId>> detect_cycles(Color i) const;

  friend bool operator==(const GraphState&, const GraphState&) = default;

 private:
  std::size_t index(NodeId u) const {
    detail::require(u >= 1 && u <= n_, "node id out of range");
    return u - 1;
  }

  std::uint32_t n_ = 0;
  std::uint32_t m_ = 0;
  std::uint32_t k_ = 0;
  std::uint64_t edges_ = 0;
  std::vector<NodeState> nodes_;
};

}  // namespace multitree
