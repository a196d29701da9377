// command line front end: run | batch | bound | check
//
// exit codes: 0 ok, 1 failed semantic check, 2 bad input (flags, config file,
// state file)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multitree/experiments.hpp"
#include "multitree/metrics.hpp"
#include "multitree/serialize.hpp"
#include "multitree/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace multitree;

namespace {

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string trim_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct CommonFlags {
  std::string profile = "tight";
  std::string depth_mode = "distributed";
  std::string config_path;
  SimConfig cfg;
  CLI::App* cmd = nullptr;
  std::set<std::string> from_file;

  void attach(CLI::App* where) {
    cmd = where;
    cmd->add_option("--nodes", cfg.nodes, "population size N");
    cmd->add_option("--colors", cfg.colors, "tree count M (first M nodes are roots)");
    cmd->add_option("--need", cfg.need, "colors each node wants (K)");
    cmd->add_option("--profile", profile,
                    "capacity profile: tight|loose|server_client|polarized")
        ->check(CLI::IsMember({"tight", "loose", "server_client", "polarized"}));
    cmd->add_option("--alpha", cfg.profile.alpha, "spare-capacity knob");
    cmd->add_option("--ratio,--r", cfg.profile.ratio, "server ratio r");
    cmd->add_option("--horizon", cfg.horizon, "simulated time span");
    cmd->add_option("--record-interval", cfg.record_interval, "metric sample spacing");
    cmd->add_option("--clock-rate", cfg.clock_rate, "per-node sampling rate");
    cmd->add_option("--seed", cfg.seed, "base seed")->envname("MULTITREE_SEED");
    cmd->add_option("--depth-mode", depth_mode, "instantaneous|distributed")
        ->capture_default_str()
        ->check(CLI::IsMember({"instantaneous", "distributed"}));
    cmd->add_option("--config", config_path, "flat key=value file; explicit flags win");
  }

  // a setting counts as user-provided whether it came by flag or by file
  bool provided(const std::string& flag) const {
    return cmd->count(flag) > 0 || from_file.count(flag) > 0;
  }

  // The vendored CLI11 quietly drops set_config on subcommands, so the file
  // is merged by hand: known keys only, flags beat file values.
  void merge_config_file() {
    if (config_path.empty()) return;
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot read config file: " + config_path);

    auto trim = [](std::string s) {
      auto from = s.find_first_not_of(" \t\r");
      auto to = s.find_last_not_of(" \t\r");
      return from == std::string::npos ? std::string() : s.substr(from, to - from + 1);
    };
    auto fail = [&](int lineno, const std::string& why) -> ConfigError {
      return ConfigError(config_path + ":" + std::to_string(lineno) + ": " + why);
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string text = trim(line);
      if (text.empty() || text[0] == '#' || text[0] == ';') continue;
      auto eq = text.find('=');
      if (eq == std::string::npos) throw fail(lineno, "expected key=value");
      std::string key = trim(text.substr(0, eq));
      std::string value = trim(text.substr(eq + 1));
      std::replace(key.begin(), key.end(), '_', '-');
      if (value.empty()) throw fail(lineno, "empty value for '" + key + "'");

      auto number = [&]() -> double {
        try {
          std::size_t used = 0;
          double v = std::stod(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
          return v;
        } catch (const std::exception&) {
          throw fail(lineno, "bad number '" + value + "' for '" + key + "'");
        }
      };
      auto whole = [&](double lo) -> std::uint64_t {
        double v = number();
        if (v < lo || v != std::floor(v))
          throw fail(lineno, "'" + key + "' wants a whole number >= " +
                                 std::to_string(static_cast<std::uint64_t>(lo)));
        return static_cast<std::uint64_t>(v);
      };

      static const std::set<std::string> known{
          "nodes",   "colors",          "need",       "profile",
          "alpha",   "ratio",           "horizon",    "record-interval",
          "clock-rate", "seed",         "depth-mode"};
      if (!known.count(key)) throw fail(lineno, "unknown key '" + key + "'");
      std::string flag = "--" + key;
      if (cmd->count(flag) > 0) continue;  // explicit flag wins
      if (key == "nodes")
        cfg.nodes = static_cast<std::uint32_t>(whole(0));
      else if (key == "colors")
        cfg.colors = static_cast<std::uint32_t>(whole(0));
      else if (key == "need")
        cfg.need = static_cast<std::uint32_t>(whole(0));
      else if (key == "profile")
        profile = value;
      else if (key == "alpha")
        cfg.profile.alpha = number();
      else if (key == "ratio")
        cfg.profile.ratio = static_cast<std::uint32_t>(whole(0));
      else if (key == "horizon")
        cfg.horizon = number();
      else if (key == "record-interval")
        cfg.record_interval = number();
      else if (key == "clock-rate")
        cfg.clock_rate = number();
      else if (key == "seed")
        cfg.seed = whole(0);
      else if (key == "depth-mode")
        depth_mode = value;
      else
        throw fail(lineno, "unknown key '" + key + "'");
      from_file.insert(flag);
    }

    static const std::set<std::string> profiles{"tight", "loose", "server_client",
                                                "polarized"};
    if (!profiles.count(profile))
      throw ConfigError(config_path + ": unknown profile '" + profile + "'");
    if (depth_mode != "instantaneous" && depth_mode != "distributed")
      throw ConfigError(config_path + ": unknown depth mode '" + depth_mode + "'");
  }

  SimConfig resolve() {
    merge_config_file();
    if (profile == "tight")
      cfg.profile.kind = DegreeProfile::Kind::kTight;
    else if (profile == "loose")
      cfg.profile.kind = DegreeProfile::Kind::kLoose;
    else if (profile == "server_client")
      cfg.profile.kind = DegreeProfile::Kind::kServerClient;
    else
      cfg.profile.kind = DegreeProfile::Kind::kPolarized;
    cfg.mode = depth_mode == "instantaneous" ? DepthMode::kInstantaneous
                                             : DepthMode::kDistributed;
    cfg.validate();
    return cfg;
  }
};

int cmd_run(const SimConfig& cfg, const std::string& out_dir) {
  Simulation sim(cfg);
  auto samples = sim.run();

  std::string csv = metric_csv_header() + "\n";
  for (const auto& s : samples) csv += metric_csv_row(s) + "\n";
  write_atomic(fs::path(out_dir) / "metrics.csv", csv);
  save_text(sim.state(), fs::path(out_dir) / "state.txt");

  const auto& last = samples.back();
  std::printf("run: %llu events to t=%s, covered %.4f, max depth %u, cycles %u\n",
              static_cast<unsigned long long>(sim.events()), trim_number(cfg.horizon).c_str(),
              last.fraction_covered, last.max_depth, last.cycles);
  std::printf("wrote %s and %s\n", (fs::path(out_dir) / "metrics.csv").c_str(),
              (fs::path(out_dir) / "state.txt").c_str());
  return 0;
}

json config_echo(const SimConfig& cfg, const std::string& profile,
                 const std::string& depth_mode) {
  return json{{"nodes", cfg.nodes},
              {"colors", cfg.colors},
              {"need", cfg.need},
              {"profile", profile},
              {"alpha", cfg.profile.alpha},
              {"ratio", cfg.profile.ratio},
              {"depth_mode", depth_mode},
              {"horizon", cfg.horizon},
              {"record_interval", cfg.record_interval},
              {"clock_rate", cfg.clock_rate},
              {"seed", cfg.seed}};
}

int cmd_batch(const BatchSpec& spec, const std::string& out_dir,
              const std::string& profile, const std::string& depth_mode) {
  BatchResult result = run_batch(spec);

  for (const auto& metric : result.metrics) {
    std::string csv = "t";
    for (const auto& curve : metric.curves) csv += ",p" + trim_number(curve.percentile);
    csv += "\n";
    for (std::size_t t = 0; t < result.times.size(); ++t) {
      csv += trim_number(result.times[t]);
      for (const auto& curve : metric.curves) csv += "," + trim_number(curve.values[t]);
      csv += "\n";
    }
    write_atomic(fs::path(out_dir) / (metric.metric + ".csv"), csv);
  }

  json summary;
  summary["config"] = config_echo(spec.base, profile, depth_mode);
  summary["repeats"] = spec.repeats;
  summary["percentiles"] = spec.percentiles;
  summary["run_seeds"] = result.run_seeds;
  summary["converged_fraction"] = result.converged_fraction;
  summary["wall_seconds"] = result.wall_seconds;
  write_atomic(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");

  std::printf("batch: %u runs, %.1f%% ended fully covered, %.2fs\n", spec.repeats,
              100.0 * result.converged_fraction, result.wall_seconds);
  std::printf("wrote fraction_covered.csv, max_depth.csv, summary.json under %s\n",
              out_dir.c_str());
  return 0;
}

int cmd_bound(const std::vector<std::uint32_t>& nodes_list, std::uint32_t trials,
              std::uint32_t cap, const std::vector<double>& epsilons,
              std::uint64_t seed, const std::string& out_dir) {
  std::string csv = "n,trial,settle_time\n";
  json summary = json::array();
  for (auto n : nodes_list) {
    BoundConfig bc;
    bc.nodes = n;
    bc.trials = trials;
    bc.cap = cap;
    bc.seed = seed;
    BoundResult res = run_bound(bc);
    for (std::uint32_t t = 0; t < res.settle_times.size(); ++t)
      csv += std::to_string(n) + "," + std::to_string(t) + "," +
             trim_number(res.settle_times[t]) + "\n";

    json tails = json::array();
    for (double eps : epsilons) {
      tails.push_back({{"epsilon", eps},
                       {"time_budget", res.time_budget(eps)},
                       {"tail_fraction", res.tail_fraction(eps)},
                       {"tail_limit", 3.0 * std::exp(-eps)}});
    }
    summary.push_back({{"nodes", n},
                       {"trials", trials},
                       {"depth_target", res.depth_target},
                       {"median_settle", res.median_settle},
                       {"tails", tails}});
    std::printf("bound: N=%u settles to depth<=%u, median T=%.2f\n", n,
                res.depth_target, res.median_settle);
  }
  write_atomic(fs::path(out_dir) / "settle_times.csv", csv);
  write_atomic(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
  return 0;
}

int cmd_check(const std::string& state_path, const std::string& depth_mode) {
  GraphState state = load_text(state_path);
  DepthMode mode = depth_mode == "instantaneous" ? DepthMode::kInstantaneous
                                                 : DepthMode::kDistributed;

  auto structural = state.check_assumption1();
  for (const auto& v : structural.violations)
    std::printf("structure: node %u color %u: %s\n", v.node, v.color, v.detail.c_str());

  ConvergedReport report = converged_state_report(state, mode);
  auto verdict = [](bool ok) { return ok ? "pass" : "FAIL"; };
  std::printf("converged:   %s\n", verdict(report.contract_converged));
  std::printf("coverage:    %s\n", verdict(report.coverage));
  std::printf("leaf_band:   %s\n", verdict(report.leaf_band));
  std::printf("internals:   %s\n", verdict(report.internals));
  std::printf("mixed_chain: %s\n", verdict(report.mixed_chain));
  std::printf("depth_bound: %s", verdict(report.depth_bound));
  std::printf(" (c per color:");
  for (auto c : report.shower_constant) std::printf(" %u", c);
  std::printf(")\n");

  std::size_t shown = 0;
  for (const auto& w : report.witnesses) {
    if (++shown > 10) {
      std::printf("... %zu more witnesses\n", report.witnesses.size() - 10);
      break;
    }
    std::string ids;
    for (NodeId u : w.nodes) ids += " " + std::to_string(u);
    std::printf("witness %s color %u:%s %s\n", w.check.c_str(), w.color, ids.c_str(),
                w.detail.c_str());
  }
  return structural.ok() && report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asynchronous multi-tree overlay maintenance simulator"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "single trajectory; writes metrics csv + final state");
  CommonFlags run_flags;
  run_flags.attach(run);
  std::string run_out = "out";
  run->add_option("--out", run_out, "output directory");

  // batch
  auto* batch = app.add_subcommand("batch", "repeated runs reduced to percentile curves");
  CommonFlags batch_flags;
  batch_flags.attach(batch);
  std::string batch_out = "out";
  std::string scenario_name;
  BatchSpec spec;
  batch->add_option("--out", batch_out, "output directory");
  batch->add_option("--scenario", scenario_name,
                    "preset: tight|source_coding|loose|server_client|polarized");
  batch->add_option("--repeats", spec.repeats, "number of runs");
  batch->add_option("--percentiles", spec.percentiles, "curve percentiles")
      ->delimiter(',');
  batch->add_option("--jobs", spec.jobs, "worker threads (0 = hardware)");

  // bound
  auto* bound = app.add_subcommand("bound", "settle-time tail study on reduced dynamics");
  std::vector<std::uint32_t> bound_nodes{64, 256, 1024};
  std::uint32_t bound_trials = 200;
  std::uint32_t bound_cap = 2;
  std::vector<double> bound_eps{1, 2, 3};
  std::uint64_t bound_seed = 0;
  std::string bound_out = "out";
  bound->add_option("--nodes-list", bound_nodes, "population sizes")->delimiter(',');
  bound->add_option("--trials", bound_trials, "trials per size");
  bound->add_option("--cap", bound_cap, "uniform capacity (>= 2)");
  bound->add_option("--epsilons", bound_eps, "tail offsets")->delimiter(',');
  bound->add_option("--seed", bound_seed, "base seed")->envname("MULTITREE_SEED");
  bound->add_option("--out", bound_out, "output directory");

  // check
  auto* check = app.add_subcommand("check", "audit a saved state against the converged-shape rules");
  std::string check_state;
  std::string check_mode = "instantaneous";
  check->add_option("--state", check_state, "state text file")->required();
  check->add_option("--depth-mode", check_mode, "instantaneous|distributed")
      ->capture_default_str()
      ->check(CLI::IsMember({"instantaneous", "distributed"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    // one error exit code for everything: bad flags behave like bad config
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags.resolve(), run_out);
    if (batch->parsed()) {
      if (!scenario_name.empty()) {
        batch_flags.merge_config_file();
        ScenarioParams params;
        params.nodes = batch_flags.cfg.nodes;
        // explicit settings override the preset
        if (batch_flags.provided("--need")) params.k = batch_flags.cfg.need;
        if (batch_flags.provided("--colors")) params.m = batch_flags.cfg.colors;
        params.alpha =
            batch_flags.provided("--alpha") ? batch_flags.cfg.profile.alpha : 0.1;
        params.ratio = batch_flags.cfg.profile.ratio;
        SimConfig preset = scenario(scenario_name, params);
        preset.seed = batch_flags.cfg.seed;
        if (batch_flags.provided("--horizon")) preset.horizon = batch_flags.cfg.horizon;
        if (batch_flags.provided("--record-interval"))
          preset.record_interval = batch_flags.cfg.record_interval;
        if (batch_flags.provided("--clock-rate"))
          preset.clock_rate = batch_flags.cfg.clock_rate;
        if (batch_flags.provided("--depth-mode"))
          preset.mode = batch_flags.depth_mode == "instantaneous"
                            ? DepthMode::kInstantaneous
                            : DepthMode::kDistributed;
        preset.validate();
        spec.base = preset;
        std::string profile_label = scenario_name;
        return cmd_batch(spec, batch_out, profile_label, batch_flags.depth_mode);
      }
      spec.base = batch_flags.resolve();
      return cmd_batch(spec, batch_out, batch_flags.profile, batch_flags.depth_mode);
    }
    if (bound->parsed())
      return cmd_bound(bound_nodes, bound_trials, bound_cap, bound_eps, bound_seed,
                       bound_out);
    if (check->parsed()) return cmd_check(check_state, check_mode);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "state parse error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
