#include "multitree/sim.hpp"

#include <cmath>
#include <limits>

namespace multitree {

std::vector<std::uint32_t> DegreeProfile::realize(std::uint32_t n, std::uint32_t m,
                                                  std::uint32_t k,
                                                  RandomSource& rng) const {
  std::vector<std::uint32_t> out;
  switch (kind) {
    case Kind::kTight:
      out.assign(n, k);
      for (std::uint32_t r = 0; r < m; ++r) out[r] = k - 1;
      break;
    case Kind::kLoose: {
      out.assign(n, k);
      auto bumps = static_cast<std::uint64_t>(alpha * n * k);
      for (std::uint64_t b = 0; b < bumps; ++b) ++out[rng.below(n)];
      break;
    }
    case Kind::kServerClient: {
      out.assign(n, 0);
      auto servers = static_cast<std::uint32_t>(n / ratio);
      for (std::uint32_t s = 0; s < servers; ++s) out[s] = ratio * k;
      auto bumps = static_cast<std::uint64_t>(alpha * n * k);
      for (std::uint64_t b = 0; b < bumps; ++b) ++out[rng.below(servers)];
      break;
    }
    case Kind::kPolarized: {
      out.assign(n, 0);
      auto servers = static_cast<std::uint32_t>((1.0 + alpha) * n / ratio);
      servers = std::min(servers, n);
      for (std::uint32_t s = 0; s < servers; ++s) out[s] = ratio * k;
      break;
    }
    case Kind::kExplicit:
      out = caps;
      break;
  }
  return out;
}

void SimConfig::validate() const {
  if (nodes < 2) throw ConfigError("need at least two nodes");
  if (colors < 1) throw ConfigError("need at least one color");
  if (colors >= nodes) throw ConfigError("roots need at least one non-root peer");
  if (need < 1 || need > colors)
    throw ConfigError("needed colors must be in [1, colors]");
  if (!(horizon >= 0)) throw ConfigError("horizon must be >= 0");
  if (!(record_interval > 0)) throw ConfigError("record interval must be > 0");
  if (!(clock_rate > 0)) throw ConfigError("clock rate must be > 0");

  switch (profile.kind) {
    case DegreeProfile::Kind::kTight:
      if (need < 2) throw ConfigError("tight profile gives roots cap k-1, so k >= 2");
      break;
    case DegreeProfile::Kind::kLoose:
      if (profile.alpha < 0) throw ConfigError("alpha must be >= 0");
      break;
    case DegreeProfile::Kind::kServerClient:
    case DegreeProfile::Kind::kPolarized: {
      if (profile.alpha < 0) throw ConfigError("alpha must be >= 0");
      if (profile.ratio < 1) throw ConfigError("server ratio must be >= 1");
      std::uint64_t servers =
          profile.kind == DegreeProfile::Kind::kServerClient
              ? nodes / profile.ratio
              : static_cast<std::uint64_t>((1.0 + profile.alpha) * nodes / profile.ratio);
      if (servers < colors)
        throw ConfigError("every root must fall in the server prefix");
      break;
    }
    case DegreeProfile::Kind::kExplicit:
      if (profile.caps.size() != nodes)
        throw ConfigError("explicit profile needs one cap per node");
      for (std::uint32_t r = 0; r < colors; ++r)
        if (profile.caps[r] < 1) throw ConfigError("roots need cap >= 1");
      break;
  }

  // each root seeds one child among the non-roots, who hold at most k feeds
  if (static_cast<std::uint64_t>(nodes - colors) * need < colors)
    throw ConfigError("non-roots cannot absorb one child per root");
}

GraphState init_state(const SimConfig& cfg, RandomSource& rng) {
  cfg.validate();
  auto caps = cfg.profile.realize(cfg.nodes, cfg.colors, cfg.need, rng);
  for (std::uint32_t r = 0; r < cfg.colors; ++r)
    if (caps[r] < 1) throw ConfigError("realized profile left a root without capacity");

  GraphState state(cfg.nodes, cfg.colors, cfg.need, caps);
  const std::uint32_t pool = cfg.nodes - cfg.colors;  // non-roots
  for (Color i = 1; i <= cfg.colors; ++i) {
    NodeId pick = 0;
    for (std::uint32_t attempt = 0; attempt < 64 * cfg.nodes; ++attempt) {
      NodeId t = cfg.colors + 1 + rng.below(pool);
      if (state.incoming_count(t) < cfg.need) {
        pick = t;
        break;
      }
    }
    if (pick == 0) {
      // rejection nearly never misses this long; fall back to drawing the
      // index within the eligible set so init stays total and deterministic
      std::vector<NodeId> open;
      for (NodeId t = cfg.colors + 1; t <= cfg.nodes; ++t)
        if (state.incoming_count(t) < cfg.need) open.push_back(t);
      if (open.empty()) throw ConfigError("no feasible child for root");
      pick = open[rng.below(static_cast<std::uint32_t>(open.size()))];
    }
    state.build_link(i, pick, i);
  }
  refresh_all_depths(state);
  return state;
}

Simulation::Simulation(const SimConfig& cfg, std::uint64_t run_index)
    : cfg_(cfg),
      rng_(RandomSource::for_run(cfg.seed, run_index)),
      state_(init_state(cfg_, rng_)) {}

EventRecord Simulation::step() {
  time_ += rng_.exponential(cfg_.nodes * cfg_.clock_rate);
  NodeId sampler = 1 + rng_.below(cfg_.nodes);
  NodeId target = 1 + rng_.below(cfg_.nodes - 1);
  if (target >= sampler) ++target;
  RuleOutcome outcome = on_sample(state_, sampler, target, cfg_.mode);
  ++events_;
  return {events_, time_, sampler, target, outcome};
}

std::vector<MetricSample> Simulation::run(const Observer& observer) {
  detail::require(events_ == 0 && time_ == 0, "run() starts from a fresh simulation");

  std::vector<MetricSample> samples;
  const double interval = cfg_.record_interval;
  const auto total_records =
      static_cast<std::uint64_t>(std::floor(cfg_.horizon / interval + 1e-9)) + 1;
  samples.reserve(total_records);
  std::uint64_t next_record = 0;

  auto emit_before = [&](double cutoff) {
    while (next_record < total_records) {
      double rt = static_cast<double>(next_record) * interval;
      if (!(rt < cutoff)) break;
      samples.push_back(measure(state_, rt));
      ++next_record;
    }
  };

  while (true) {
    double event_time = time_ + rng_.exponential(cfg_.nodes * cfg_.clock_rate);
    if (event_time > cfg_.horizon) {
      emit_before(std::numeric_limits<double>::infinity());
      time_ = cfg_.horizon;
      break;
    }
    emit_before(event_time);  // a sample at time r reflects events up to r
    time_ = event_time;
    NodeId sampler = 1 + rng_.below(cfg_.nodes);
    NodeId target = 1 + rng_.below(cfg_.nodes - 1);
    if (target >= sampler) ++target;
    RuleOutcome outcome = on_sample(state_, sampler, target, cfg_.mode);
    ++events_;
    if (observer) observer({events_, time_, sampler, target, outcome}, state_);
  }
  return samples;
}

}  // namespace multitree
