#include "multitree/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace multitree {

PotentialTriple potential(const GraphState& state) {
  PotentialTriple p;
  p.edges = state.edge_count();
  for (Color i = 1; i <= state.m(); ++i) {
    auto depths = state.true_depths(i);
    for (NodeId u = 1; u <= state.n(); ++u) {
      p.y += depths[u - 1].clamp(state.n());
      p.s += static_cast<std::uint64_t>(u) * i * state.child_count(u, i);
    }
  }
  return p;
}

bool potential_improved(const PotentialTriple& before, const PotentialTriple& after) {
  if (after.edges != before.edges) return after.edges > before.edges;
  if (after.y != before.y) return after.y < before.y;
  return after.s > before.s;
}

std::uint32_t covered_count(const GraphState& state) {
  std::vector<std::uint32_t> colors_held(state.n(), 0);
  for (Color i = 1; i <= state.m(); ++i) {
    auto depths = state.true_depths(i);
    for (NodeId u = 1; u <= state.n(); ++u)
      if (!depths[u - 1].is_infinite()) ++colors_held[u - 1];
  }
  std::uint32_t covered = 0;
  for (auto held : colors_held)
    if (held >= state.k()) ++covered;
  return covered;
}

double fraction_fully_covered(const GraphState& state) {
  return static_cast<double>(covered_count(state)) / state.n();
}

DepthReport tree_depths(const GraphState& state) {
  DepthReport report;
  report.max_depth.assign(state.m(), 0);
  report.uncovered.assign(state.m(), 0);
  for (Color i = 1; i <= state.m(); ++i) {
    auto depths = state.true_depths(i);
    for (NodeId u = 1; u <= state.n(); ++u) {
      if (depths[u - 1].is_infinite())
        ++report.uncovered[i - 1];
      else
        report.max_depth[i - 1] = std::max(report.max_depth[i - 1], depths[u - 1].hops());
    }
    report.overall_max = std::max(report.overall_max, report.max_depth[i - 1]);
  }
  return report;
}

std::uint32_t cycle_count(const GraphState& state) {
  std::uint32_t total = 0;
  for (Color i = 1; i <= state.m(); ++i)
    total += static_cast<std::uint32_t>(state.detect_cycles(i).size());
  return total;
}

std::uint32_t buffered_depth_error(const GraphState& state) {
  std::uint32_t worst = 0;
  for (Color i = 1; i <= state.m(); ++i) {
    auto depths = state.true_depths(i);
    for (NodeId u = 1; u <= state.n(); ++u) {
      Depth truth = depths[u - 1];
      Depth believed = state.buffered_depth(u, i);
      if (truth.is_infinite() || believed.is_infinite()) continue;
      std::uint32_t gap = truth.hops() > believed.hops()
                              ? truth.hops() - believed.hops()
                              : believed.hops() - truth.hops();
      worst = std::max(worst, gap);
    }
  }
  return worst;
}

MetricSample measure(const GraphState& state, double time) {
  MetricSample s;
  s.time = time;

  std::vector<std::uint32_t> colors_held(state.n(), 0);
  s.edges = state.edge_count();
  for (Color i = 1; i <= state.m(); ++i) {
    auto depths = state.true_depths(i);
    std::uint32_t deepest = 0;
    for (NodeId u = 1; u <= state.n(); ++u) {
      Depth d = depths[u - 1];
      s.y += d.clamp(state.n());
      s.s += static_cast<std::uint64_t>(u) * i * state.child_count(u, i);
      if (!d.is_infinite()) {
        ++colors_held[u - 1];
        deepest = std::max(deepest, d.hops());
      }
      Depth believed = state.buffered_depth(u, i);
      if (!d.is_infinite() && !believed.is_infinite()) {
        std::uint32_t gap = d.hops() > believed.hops() ? d.hops() - believed.hops()
                                                       : believed.hops() - d.hops();
        s.buffered_error = std::max(s.buffered_error, gap);
      }
    }
    s.max_depth = std::max(s.max_depth, deepest);
    s.cycles += static_cast<std::uint32_t>(state.detect_cycles(i).size());
  }
  std::uint32_t covered = 0;
  for (auto held : colors_held)
    if (held >= state.k()) ++covered;
  s.fraction_covered = static_cast<double>(covered) / state.n();
  return s;
}

std::string metric_csv_header() {
  return "t,fraction_covered,max_depth,edges,Y,S,cycles,buffered_depth_error";
}

std::string metric_csv_row(const MetricSample& s) {
  char buf[192];
  std::snprintf(buf, sizeof buf, "%.10g,%.10g,%u,%llu,%llu,%llu,%u,%u", s.time,
                s.fraction_covered, s.max_depth,
                static_cast<unsigned long long>(s.edges),
                static_cast<unsigned long long>(s.y),
                static_cast<unsigned long long>(s.s), s.cycles, s.buffered_error);
  return buf;
}

bool is_converged(const GraphState& state, DepthMode mode) {
  (void)mode;  // after a full refresh both modes read the same (true) depths
  GraphState probe = state;
  refresh_all_depths(probe);
  for (NodeId u = 1; u <= probe.n(); ++u)
    for (NodeId v = 1; v <= probe.n(); ++v) {
      if (u == v) continue;
      if (plan_update(probe, u, v, DepthMode::kDistributed)) return false;
    }
  return true;
}

namespace {

void witness(ConvergedReport& report, std::string check, Color i,
             std::vector<NodeId> nodes, std::string detail) {
  report.witnesses.push_back({std::move(check), i, std::move(nodes), std::move(detail)});
}

}  // namespace

ConvergedReport converged_state_report(const GraphState& state, DepthMode mode) {
  ConvergedReport report;
  report.contract_converged = is_converged(state, mode);
  if (!report.contract_converged)
    witness(report, "contract", 0, {}, "audited state is not converged");

  report.coverage = true;
  report.leaf_band = true;
  report.internals = true;
  report.mixed_chain = true;
  report.depth_bound = true;
  report.shower_constant.assign(state.m(), 0);

  std::vector<std::vector<Depth>> depths;
  depths.reserve(state.m());
  for (Color i = 1; i <= state.m(); ++i) depths.push_back(state.true_depths(i));

  std::vector<std::uint32_t> colors_held(state.n(), 0);
  for (Color i = 1; i <= state.m(); ++i)
    for (NodeId u = 1; u <= state.n(); ++u)
      if (!depths[i - 1][u - 1].is_infinite()) ++colors_held[u - 1];
  for (NodeId u = 1; u <= state.n(); ++u) {
    if (colors_held[u - 1] < state.k()) {
      report.coverage = false;
      witness(report, "coverage", 0, {u},
              "holds " + std::to_string(colors_held[u - 1]) + " of " +
                  std::to_string(state.k()) + " colors");
    }
  }

  for (Color i = 1; i <= state.m(); ++i) {
    const auto& d = depths[i - 1];
    std::uint32_t deepest = 0;
    for (NodeId u = 1; u <= state.n(); ++u)
      if (!d[u - 1].is_infinite()) deepest = std::max(deepest, d[u - 1].hops());

    // leaves of this color's tree sit within one hop of each other
    NodeId lo = 0, hi = 0;
    for (NodeId u = 1; u <= state.n(); ++u) {
      if (d[u - 1].is_infinite() || state.child_count(u, i) != 0) continue;
      if (lo == 0 || d[u - 1] < d[lo - 1]) lo = u;
      if (hi == 0 || d[u - 1] > d[hi - 1]) hi = u;
    }
    if (lo != 0 && d[hi - 1].hops() - d[lo - 1].hops() > 1) {
      report.leaf_band = false;
      witness(report, "leaf_band", i, {lo, hi},
              "leaf depths " + std::to_string(d[lo - 1].hops()) + " and " +
                  std::to_string(d[hi - 1].hops()));
    }

    // nodes two or more hops above the bottom must be saturated and keep at
    // least one child in this color
    for (NodeId u = 1; u <= state.n(); ++u) {
      if (d[u - 1].is_infinite() || d[u - 1].hops() + 2 > deepest) continue;
      if (state.out_degree(u) < state.cap(u) || state.child_count(u, i) == 0) {
        report.internals = false;
        witness(report, "internals", i, {u},
                "interior node with spare capacity or no child of this color");
      }
    }

    // measured shower-head constant: smallest truncation depth whose
    // frontier (cut nodes plus real leaves above it) counts at least M
    std::uint32_t c = deepest;
    for (std::uint32_t cut = 0; cut <= deepest; ++cut) {
      std::uint32_t frontier = 0;
      for (NodeId u = 1; u <= state.n(); ++u) {
        if (d[u - 1].is_infinite()) continue;
        std::uint32_t h = d[u - 1].hops();
        if (h == cut || (h < cut && state.child_count(u, i) == 0)) ++frontier;
      }
      if (frontier >= state.m()) {
        c = cut;
        break;
      }
    }
    report.shower_constant[i - 1] = c;
    double bound = std::log2(static_cast<double>(state.n()) + 1.0) + c;
    if (static_cast<double>(deepest) > bound + 1e-9) {
      report.depth_bound = false;
      witness(report, "depth_bound", i, {},
              "depth " + std::to_string(deepest) + " exceeds log2(N+1) + " +
                  std::to_string(c));
    }
  }

  // nodes forwarding both colors must line up in a strictly dominating
  // depth chain
  for (Color i = 1; i <= state.m(); ++i) {
    for (Color j = i + 1; j <= state.m(); ++j) {
      std::vector<NodeId> mixed;
      for (NodeId u = 1; u <= state.n(); ++u)
        if (state.child_count(u, i) > 0 && state.child_count(u, j) > 0)
          mixed.push_back(u);
      std::sort(mixed.begin(), mixed.end(), [&](NodeId a, NodeId b) {
        auto ka = std::make_pair(depths[i - 1][a - 1], depths[j - 1][a - 1]);
        auto kb = std::make_pair(depths[i - 1][b - 1], depths[j - 1][b - 1]);
        return ka < kb;
      });
      for (std::size_t idx = 1; idx < mixed.size(); ++idx) {
        NodeId a = mixed[idx - 1], b = mixed[idx];
        if (!(depths[i - 1][a - 1] < depths[i - 1][b - 1] &&
              depths[j - 1][a - 1] < depths[j - 1][b - 1])) {
          report.mixed_chain = false;
          witness(report, "mixed_chain", i, {a, b},
                  "colors " + std::to_string(i) + "/" + std::to_string(j) +
                      " depths do not strictly dominate");
        }
      }
    }
  }
  return report;
}

}  // namespace multitree
