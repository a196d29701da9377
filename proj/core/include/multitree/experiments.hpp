#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multitree/sim.hpp"

namespace multitree {

struct BatchSpec {
  SimConfig base;
  std::uint32_t repeats = 500;
  // curve labels: percentile a means "a% of runs are this bad or worse"
  std::vector<double> percentiles{0.2, 1, 5, 50, 100};
  std::uint32_t jobs = 1;
};

struct PercentileCurve {
  double percentile = 0;
  std::vector<double> values;  // one per record time
};

struct MetricCurves {
  std::string metric;  // fraction_covered or max_depth
  std::vector<PercentileCurve> curves;
};

struct BatchResult {
  std::vector<double> times;
  std::vector<MetricCurves> metrics;
  std::vector<std::uint64_t> run_seeds;   // derived stream seeds, by run index
  // per-run summaries, by run index
  std::vector<double> final_coverage;
  std::vector<std::uint32_t> final_cycles;
  std::vector<double> coverage_backslide;  // total downward coverage movement
  double converged_fraction = 0;           // runs ending at full coverage
  double wall_seconds = 0;
};

// Repeats the base run with per-run derived streams and reduces each metric
// to percentile curves. Worker count changes nothing but wall time: runs are
// keyed by index and reduced in index order.
BatchResult run_batch(const BatchSpec& spec);

// value of the a-percentile curve over per-run values at one record time;
// `larger_is_worse` picks which tail counts as bad
double percentile_curve_value(std::vector<double> values, double percentile,
                              bool larger_is_worse);

struct ScenarioParams {
  std::uint32_t nodes = 1000;
  std::uint32_t k = 0;  // 0 = scenario default
  std::uint32_t m = 0;  // 0 = scenario default
  double alpha = 0.1;
  std::uint32_t ratio = 2;
};

// Named experiment presets: tight, source_coding, loose, server_client,
// polarized. Throws ConfigError on an unknown name.
SimConfig scenario(const std::string& name, const ScenarioParams& params = {});
const std::vector<std::string>& scenario_names();

// Single-color reduced dynamics used for the settle-time tail study: on each
// tick the sampler re-parents under the target iff the target has a spare
// slot, is fed, and sits at least two levels higher. T is the first time the
// whole population fits within depth ceil(log2(N+1)).
struct BoundConfig {
  std::uint32_t nodes = 64;
  std::uint32_t trials = 200;
  std::uint32_t cap = 2;  // every node, root included; must be >= 2
  std::uint64_t seed = 0;
  double max_time = 1e5;  // safety stop; settle times live far below this
};

struct BoundResult {
  std::uint32_t nodes = 0;
  std::uint32_t depth_target = 0;         // ceil(log2(N+1))
  std::vector<double> settle_times;       // one per trial
  double median_settle = 0;
  double time_budget(double epsilon) const;       // 21*log2(N+1) + 16*epsilon
  double tail_fraction(double epsilon) const;     // share of trials past the budget
};

BoundResult run_bound(const BoundConfig& cfg);

}  // namespace multitree
