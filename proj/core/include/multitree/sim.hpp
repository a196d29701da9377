#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "multitree/graph.hpp"
#include "multitree/metrics.hpp"
#include "multitree/protocol.hpp"
#include "multitree/rng.hpp"

namespace multitree {

// bad user input (CLI/config); distinct from the logic_error hard faults
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Capacity recipes. A profile is realized against (n, m, k) at init time, so
// one recipe scales across node counts.
struct DegreeProfile {
  enum class Kind {
    kTight,        // roots k-1, everyone else k: caps sum to the feasibility minimum
    kLoose,        // everyone k, then floor(alpha*n*k) random unit bumps
    kServerClient, // floor(n/ratio) low-id servers (roots included) with cap
                   // ratio*k plus random bumps; clients get 0
    kPolarized,    // like server-client but floor((1+alpha)*n/ratio) servers, no bumps
    kExplicit,
  };
  Kind kind = Kind::kTight;
  double alpha = 0.0;
  std::uint32_t ratio = 2;
  std::vector<std::uint32_t> caps;  // kExplicit only

  static DegreeProfile tight() { return {}; }
  static DegreeProfile loose(double alpha) {
    return {Kind::kLoose, alpha, 2, {}};
  }
  static DegreeProfile server_client(std::uint32_t ratio, double alpha) {
    return {Kind::kServerClient, alpha, ratio, {}};
  }
  static DegreeProfile polarized(std::uint32_t ratio, double alpha) {
    return {Kind::kPolarized, alpha, ratio, {}};
  }
  static DegreeProfile explicit_caps(std::vector<std::uint32_t> caps) {
    return {Kind::kExplicit, 0.0, 2, std::move(caps)};
  }

  std::vector<std::uint32_t> realize(std::uint32_t n, std::uint32_t m,
                                     std::uint32_t k, RandomSource& rng) const;
};

struct SimConfig {
  std::uint32_t nodes = 1000;
  std::uint32_t colors = 2;  // M, also the number of roots
  std::uint32_t need = 2;    // K, colors a node wants
  DegreeProfile profile;
  DepthMode mode = DepthMode::kDistributed;
  double horizon = 100.0;
  double record_interval = 1.0;
  double clock_rate = 1.0;  // per-node sampling rate
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

struct EventRecord {
  std::uint64_t index = 0;
  double time = 0;
  NodeId sampler = 0;
  NodeId target = 0;
  RuleOutcome outcome;
  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

// Starting state: no links except one child drawn per root (uniform over the
// non-roots, redrawn while the pick cannot take another feed), buffered
// depths set to the truth.
GraphState init_state(const SimConfig& cfg, RandomSource& rng);

// Poisson superposition of per-node exponential clocks: global event rate
// n * clock_rate, sampler uniform, target uniform over the rest.
class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg) : Simulation(cfg, 0) {}
  Simulation(const SimConfig& cfg, std::uint64_t run_index);

  EventRecord step();

  using Observer = std::function<void(const EventRecord&, const GraphState&)>;
  // Advance to the horizon, recording a metric sample at every multiple of
  // record_interval from 0 to horizon inclusive. A sample at time r reflects
  // every event with time <= r.
  std::vector<MetricSample> run(const Observer& observer = nullptr);

  const GraphState& state() const { return state_; }
  GraphState& state() { return state_; }
  double time() const { return time_; }
  std::uint64_t events() const { return events_; }
  const SimConfig& config() const { return cfg_; }

 private:
  SimConfig cfg_;
  RandomSource rng_;
  GraphState state_;
  double time_ = 0;
  std::uint64_t events_ = 0;
};

}  // namespace multitree
