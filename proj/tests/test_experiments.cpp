#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "multitree/experiments.hpp"

using namespace multitree;

namespace {

SimConfig small_base() {
  SimConfig cfg;
  cfg.nodes = 40;
  cfg.colors = 2;
  cfg.need = 2;
  cfg.profile = DegreeProfile::tight();
  cfg.mode = DepthMode::kDistributed;
  cfg.horizon = 20;
  cfg.record_interval = 2;
  cfg.seed = 7;
  return cfg;
}

bool same_except_wall(const BatchResult& a, const BatchResult& b) {
  if (a.times != b.times) return false;
  if (a.metrics.size() != b.metrics.size()) return false;
  for (std::size_t m = 0; m < a.metrics.size(); ++m) {
    if (a.metrics[m].metric != b.metrics[m].metric) return false;
    if (a.metrics[m].curves.size() != b.metrics[m].curves.size()) return false;
    for (std::size_t c = 0; c < a.metrics[m].curves.size(); ++c) {
      if (a.metrics[m].curves[c].percentile != b.metrics[m].curves[c].percentile)
        return false;
      if (a.metrics[m].curves[c].values != b.metrics[m].curves[c].values)
        return false;
    }
  }
  return a.run_seeds == b.run_seeds && a.final_coverage == b.final_coverage &&
         a.final_cycles == b.final_cycles &&
         a.coverage_backslide == b.coverage_backslide &&
         a.converged_fraction == b.converged_fraction;
}

}  // namespace

TEST_CASE("percentile curves read the requested tail") {
  std::vector<double> ladder(500);
  std::iota(ladder.begin(), ladder.end(), 1.0);
  std::shuffle(ladder.begin(), ladder.end(), std::mt19937{17});

  // small values are bad (coverage): the 0.2% curve is the very worst run
  CHECK(percentile_curve_value(ladder, 0.2, false) == 1.0);
  CHECK(percentile_curve_value(ladder, 1, false) == 5.0);
  CHECK(percentile_curve_value(ladder, 100, false) == 500.0);

  // large values are bad (depth): same labels, other tail
  CHECK(percentile_curve_value(ladder, 0.2, true) == 500.0);
  CHECK(percentile_curve_value(ladder, 1, true) == 496.0);
  CHECK(percentile_curve_value(ladder, 100, true) == 1.0);

  CHECK(percentile_curve_value({10, 20, 30, 40}, 50, false) == 20.0);
  CHECK(percentile_curve_value({10, 20, 30, 40}, 50, true) == 30.0);

  // one run is every percentile at once
  CHECK(percentile_curve_value({0.75}, 0.2, false) == 0.75);
  CHECK(percentile_curve_value({0.75}, 100, true) == 0.75);
}

TEST_CASE("a batch reduces the same runs no matter how many workers") {
  BatchSpec spec;
  spec.base = small_base();
  spec.repeats = 6;
  spec.jobs = 1;
  auto serial = run_batch(spec);
  spec.jobs = 3;
  auto threaded = run_batch(spec);
  CHECK(same_except_wall(serial, threaded));

  REQUIRE(serial.times.size() == 11);
  CHECK(serial.times.front() == 0.0);
  CHECK(serial.times.back() == doctest::Approx(20.0));
  REQUIRE(serial.metrics.size() == 2);
  CHECK(serial.metrics[0].metric == "fraction_covered");
  CHECK(serial.metrics[1].metric == "max_depth");
  REQUIRE(serial.run_seeds.size() == 6);
  for (std::uint32_t r = 0; r < 6; ++r)
    CHECK(serial.run_seeds[r] == RandomSource::stream_seed(spec.base.seed, r));
}

TEST_CASE("a one-run batch mirrors the run itself") {
  BatchSpec spec;
  spec.base = small_base();
  spec.repeats = 1;
  spec.percentiles = {1, 100};
  auto batch = run_batch(spec);

  auto reference = Simulation(spec.base, 0).run();
  REQUIRE(batch.times.size() == reference.size());
  for (const auto& mc : batch.metrics)
    for (const auto& curve : mc.curves)
      for (std::size_t t = 0; t < reference.size(); ++t) {
        double expect = mc.metric == "fraction_covered"
                            ? reference[t].fraction_covered
                            : static_cast<double>(reference[t].max_depth);
        CHECK(curve.values[t] == expect);
      }
  CHECK(batch.final_coverage[0] == reference.back().fraction_covered);
}

TEST_CASE("coverage never backslides when depths are read instantaneously") {
  BatchSpec spec;
  spec.base = small_base();
  spec.base.mode = DepthMode::kInstantaneous;
  spec.repeats = 8;
  auto batch = run_batch(spec);
  for (double slide : batch.coverage_backslide) CHECK(slide == 0.0);
  for (auto cycles : batch.final_cycles) CHECK(cycles == 0);
}

TEST_CASE("experiment presets pin the published setups") {
  CHECK(scenario_names() ==
        std::vector<std::string>{"tight", "source_coding", "loose",
                                 "server_client", "polarized"});

  auto tight = scenario("tight");
  CHECK(tight.nodes == 1000);
  CHECK(tight.colors == 2);
  CHECK(tight.need == 2);
  CHECK(tight.profile.kind == DegreeProfile::Kind::kTight);
  CHECK(tight.mode == DepthMode::kDistributed);
  CHECK(tight.horizon == 100.0);
  CHECK(tight.record_interval == 1.0);

  auto sc = scenario("source_coding");
  CHECK(sc.colors == 4);
  CHECK(sc.need == 3);
  CHECK(sc.profile.kind == DegreeProfile::Kind::kTight);

  ScenarioParams p;
  p.nodes = 200;
  p.alpha = 0.25;
  p.ratio = 5;
  auto loose = scenario("loose", p);
  CHECK(loose.nodes == 200);
  CHECK(loose.profile.kind == DegreeProfile::Kind::kLoose);
  CHECK(loose.profile.alpha == 0.25);

  auto servers = scenario("server_client", p);
  CHECK(servers.profile.kind == DegreeProfile::Kind::kServerClient);
  CHECK(servers.profile.ratio == 5);

  auto pol = scenario("polarized", p);
  CHECK(pol.profile.kind == DegreeProfile::Kind::kPolarized);
  CHECK(pol.profile.alpha == 0.25);

  p.k = 1;
  p.m = 3;
  auto overridden = scenario("tight", p);
  CHECK(overridden.need == 1);
  CHECK(overridden.colors == 3);

  CHECK_THROWS_AS(scenario("totally_new"), ConfigError);
}

TEST_CASE("settle times for a three-node population are short and positive") {
  BoundConfig cfg;
  cfg.nodes = 3;
  cfg.trials = 64;
  cfg.seed = 11;
  auto r = run_bound(cfg);
  CHECK(r.nodes == 3);
  CHECK(r.depth_target == 2);  // any shape over three nodes fits two levels
  REQUIRE(r.settle_times.size() == 64);
  for (double t : r.settle_times) {
    CHECK(t > 0.0);           // one node always starts unfed
    CHECK(t < cfg.max_time);  // and joins quickly
  }
  // joining is a rate-one race here, so the median sits near one unit
  CHECK(r.median_settle > 0.05);
  CHECK(r.median_settle < 5.0);
  CHECK(r.tail_fraction(1) == 0.0);
}

TEST_CASE("an eight-node population settles well inside its budget") {
  BoundConfig cfg;
  cfg.nodes = 8;
  cfg.trials = 50;
  cfg.seed = 23;
  auto r = run_bound(cfg);
  CHECK(r.depth_target == 4);
  for (double t : r.settle_times) CHECK(t < cfg.max_time);
  CHECK(r.median_settle < r.time_budget(0));
}

TEST_CASE("the budget and tail bookkeeping follow the declared formulas") {
  BoundResult r;
  r.nodes = 64;
  r.settle_times = {10.0, 1000.0};
  CHECK(r.time_budget(0) == doctest::Approx(21.0 * std::log2(65.0)));
  CHECK(r.time_budget(2) == doctest::Approx(21.0 * std::log2(65.0) + 32.0));
  CHECK(r.tail_fraction(1) == 0.5);  // budget ~142.5 splits the two trials
}
