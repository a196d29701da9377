#include "multitree/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace multitree {

double percentile_curve_value(std::vector<double> values, double percentile,
                              bool larger_is_worse) {
  detail::require(!values.empty(), "percentile of empty sample");
  const auto r = static_cast<std::uint64_t>(values.size());
  // the 1e-9 keeps e.g. 0.2% of 500 from rounding up to rank 2
  auto rank = static_cast<std::uint64_t>(
      std::ceil(percentile * static_cast<double>(r) / 100.0 - 1e-9));
  rank = std::clamp<std::uint64_t>(rank, 1, r);
  std::sort(values.begin(), values.end());
  return larger_is_worse ? values[r - rank] : values[rank - 1];
}

BatchResult run_batch(const BatchSpec& spec) {
  spec.base.validate();
  detail::require(spec.repeats >= 1, "need at least one run");
  const auto start = std::chrono::steady_clock::now();

  std::vector<std::vector<MetricSample>> runs(spec.repeats);
  std::atomic<std::uint32_t> cursor{0};
  auto worker = [&] {
    while (true) {
      std::uint32_t r = cursor.fetch_add(1);
      if (r >= spec.repeats) break;
      Simulation sim(spec.base, r);
      runs[r] = sim.run();
    }
  };

  std::uint32_t jobs = spec.jobs == 0 ? std::thread::hardware_concurrency() : spec.jobs;
  jobs = std::clamp<std::uint32_t>(jobs, 1, spec.repeats);
  std::vector<std::thread> pool;
  for (std::uint32_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  BatchResult out;
  out.times.reserve(runs[0].size());
  for (const auto& s : runs[0]) out.times.push_back(s.time);

  struct MetricDef {
    const char* name;
    bool larger_is_worse;
    double (*pick)(const MetricSample&);
  };
  const MetricDef defs[] = {
      {"fraction_covered", false,
       [](const MetricSample& s) { return s.fraction_covered; }},
      {"max_depth", true,
       [](const MetricSample& s) { return static_cast<double>(s.max_depth); }},
  };
  for (const auto& def : defs) {
    MetricCurves mc;
    mc.metric = def.name;
    for (double a : spec.percentiles) {
      PercentileCurve curve;
      curve.percentile = a;
      curve.values.reserve(out.times.size());
      std::vector<double> column(spec.repeats);
      for (std::size_t t = 0; t < out.times.size(); ++t) {
        for (std::uint32_t r = 0; r < spec.repeats; ++r)
          column[r] = def.pick(runs[r][t]);
        curve.values.push_back(
            percentile_curve_value(column, a, def.larger_is_worse));
      }
      mc.curves.push_back(std::move(curve));
    }
    out.metrics.push_back(std::move(mc));
  }

  out.run_seeds.reserve(spec.repeats);
  out.final_coverage.reserve(spec.repeats);
  out.final_cycles.reserve(spec.repeats);
  out.coverage_backslide.reserve(spec.repeats);
  std::uint32_t converged = 0;
  for (std::uint32_t r = 0; r < spec.repeats; ++r) {
    out.run_seeds.push_back(RandomSource::stream_seed(spec.base.seed, r));
    const auto& series = runs[r];
    out.final_coverage.push_back(series.back().fraction_covered);
    out.final_cycles.push_back(series.back().cycles);
    double slide = 0;
    for (std::size_t t = 1; t < series.size(); ++t)
      slide += std::max(0.0, series[t - 1].fraction_covered -
                                 series[t].fraction_covered);
    out.coverage_backslide.push_back(slide);
    if (series.back().fraction_covered >= 1.0) ++converged;
  }
  out.converged_fraction = static_cast<double>(converged) / spec.repeats;
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{
      "tight", "source_coding", "loose", "server_client", "polarized"};
  return names;
}

SimConfig scenario(const std::string& name, const ScenarioParams& params) {
  SimConfig cfg;
  cfg.nodes = params.nodes;
  cfg.mode = DepthMode::kDistributed;
  cfg.horizon = 100.0;
  cfg.record_interval = 1.0;

  auto pick = [](std::uint32_t v, std::uint32_t fallback) {
    return v == 0 ? fallback : v;
  };
  if (name == "tight") {
    cfg.need = pick(params.k, 2);
    cfg.colors = pick(params.m, 2);
    cfg.profile = DegreeProfile::tight();
  } else if (name == "source_coding") {
    // striped feeds: more colors than any one node needs
    cfg.need = pick(params.k, 3);
    cfg.colors = pick(params.m, 4);
    cfg.profile = DegreeProfile::tight();
  } else if (name == "loose") {
    cfg.need = pick(params.k, 2);
    cfg.colors = pick(params.m, 2);
    cfg.profile = DegreeProfile::loose(params.alpha);
  } else if (name == "server_client") {
    cfg.need = pick(params.k, 2);
    cfg.colors = pick(params.m, 2);
    cfg.profile = DegreeProfile::server_client(params.ratio, params.alpha);
  } else if (name == "polarized") {
    cfg.need = pick(params.k, 2);
    cfg.colors = pick(params.m, 2);
    cfg.profile = DegreeProfile::polarized(params.ratio, params.alpha);
  } else {
    throw ConfigError("unknown scenario: " + name);
  }
  return cfg;
}

namespace {

std::uint32_t ceil_log2(std::uint64_t x) {
  std::uint32_t d = 0;
  std::uint64_t reach = 1;
  while (reach < x) {
    reach <<= 1;
    ++d;
  }
  return d;
}

}  // namespace

double BoundResult::time_budget(double epsilon) const {
  return 21.0 * std::log2(static_cast<double>(nodes) + 1.0) + 16.0 * epsilon;
}

double BoundResult::tail_fraction(double epsilon) const {
  const double budget = time_budget(epsilon);
  std::uint64_t late = 0;
  for (double t : settle_times)
    if (t > budget) ++late;
  return settle_times.empty()
             ? 0.0
             : static_cast<double>(late) / static_cast<double>(settle_times.size());
}

BoundResult run_bound(const BoundConfig& cfg) {
  detail::require(cfg.nodes >= 2, "need at least two nodes");
  detail::require(cfg.cap >= 2, "reduced dynamics assume cap >= 2 everywhere");
  detail::require(cfg.trials >= 1, "need at least one trial");

  BoundResult result;
  result.nodes = cfg.nodes;
  result.depth_target = ceil_log2(static_cast<std::uint64_t>(cfg.nodes) + 1);

  SimConfig base;
  base.nodes = cfg.nodes;
  base.colors = 1;
  base.need = 1;
  base.profile =
      DegreeProfile::explicit_caps(std::vector<std::uint32_t>(cfg.nodes, cfg.cap));
  base.seed = cfg.seed;

  const Depth target_band = Depth::finite(result.depth_target);
  std::vector<NodeId> stack;

  for (std::uint32_t trial = 0; trial < cfg.trials; ++trial) {
    auto rng = RandomSource::for_run(cfg.seed, trial);
    GraphState state = init_state(base, rng);

    // depths maintained incrementally: a re-parent shifts exactly the
    // sampler's subtree, so T is detected without rescans
    std::vector<Depth> depth(cfg.nodes, Depth::infinite());
    std::uint32_t above = 0;
    for (NodeId u = 1; u <= cfg.nodes; ++u) {
      depth[u - 1] = state.true_depth(u, 1);
      if (depth[u - 1] > target_band) ++above;
    }

    double now = 0;
    double settle = cfg.max_time;
    while (above > 0) {
      now += rng.exponential(static_cast<double>(cfg.nodes));
      if (now > cfg.max_time) break;
      NodeId s = 1 + rng.below(cfg.nodes);
      NodeId t = 1 + rng.below(cfg.nodes - 1);
      if (t >= s) ++t;

      if (!state.has_incoming(t, 1)) continue;
      if (state.out_degree(t) >= state.cap(t)) continue;
      Depth dt = depth[t - 1];
      Depth ds = depth[s - 1];
      if (dt.is_infinite() || !(dt.next().next() <= ds)) continue;

      if (auto p = state.tree_parent(s, 1)) state.remove_link(*p, s, 1);
      state.build_link(t, s, 1);

      Depth fresh = dt.next();
      if (ds.is_infinite()) {
        // an unfed node never acquired children, its subtree is itself
        depth[s - 1] = fresh;
        if (!(fresh > target_band)) --above;
        continue;
      }
      const std::uint32_t drop = ds.hops() - fresh.hops();
      stack.assign(1, s);
      while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        Depth before = depth[u - 1];
        Depth after = Depth::finite(before.hops() - drop);
        detail::require(after <= before, "settle dynamics raised a depth");
        depth[u - 1] = after;
        if (before > target_band && !(after > target_band)) --above;
        for (NodeId c : state.children(u, 1)) stack.push_back(c);
      }
    }
    if (above == 0) settle = now;
    result.settle_times.push_back(settle);
  }

  std::vector<double> sorted = result.settle_times;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t half = sorted.size() / 2;
  result.median_settle = sorted.size() % 2 == 1
                             ? sorted[half]
                             : 0.5 * (sorted[half - 1] + sorted[half]);
  return result;
}

}  // namespace multitree
