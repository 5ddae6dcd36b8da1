#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "formsim/config.hpp"
#include "formsim/log_io.hpp"
#include "formsim/metrics.hpp"
#include "formsim/sim.hpp"

namespace fs = std::filesystem;
using namespace formsim;

namespace {

constexpr int k_exit_ok = 0;
constexpr int k_exit_config = 2;
constexpr int k_exit_io = 3;
constexpr int k_exit_aborted = 4;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string scenario;
  std::string strategy;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> duration;
  std::size_t decimate{1};
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_overrides = true) {
  cmd->add_option("--config", opts.config_path, "configuration file (JSON)");
  cmd->add_option("--out", opts.out_dir, "output directory");
  if (with_overrides) {
    cmd->add_option("--scenario", opts.scenario,
                    "linear | square | linear-queue");
    cmd->add_option("--strategy", opts.strategy,
                    "continuous | fixed | relative | switched");
    cmd->add_option("--seed", opts.seed, "rng seed");
    cmd->add_option("--dt", opts.dt, "integration step (s)");
    cmd->add_option("--duration", opts.duration, "run length (s)");
    cmd->add_option("--decimate", opts.decimate,
                    "keep every k-th step in the state csv");
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << content;
  if (!os) throw IoError("failed writing " + path.string());
}

SimConfig load_config(const CommonOpts& opts) {
  SimConfig cfg = opts.config_path.empty()
                      ? SimConfig::defaults()
                      : parse_config(read_file(opts.config_path));
  if (!opts.scenario.empty()) {
    const auto kind = scenario_from_string(opts.scenario);
    if (!kind) throw ConfigError("scenario: unknown value " + opts.scenario);
    cfg.scenario = *kind;
  }
  if (!opts.strategy.empty()) {
    const auto kind = strategy_from_string(opts.strategy);
    if (!kind) throw ConfigError("strategy: unknown value " + opts.strategy);
    cfg.strategy = *kind;
  }
  if (opts.seed) {
    cfg.seed = *opts.seed;
    cfg.sampler.seed = *opts.seed;
  }
  if (opts.dt) cfg.dt = *opts.dt;
  if (opts.duration) cfg.duration = *opts.duration;
  cfg.validate();
  return cfg;
}

fs::path resolve_out_dir(const CommonOpts& opts, const SimConfig& cfg,
                         const char* command) {
  if (!opts.out_dir.empty()) return opts.out_dir;
  fs::path root = "out";
  if (const char* env = std::getenv("FORMSIM_OUT"); env && *env) root = env;
  std::ostringstream name;
  name << command << '-' << to_string(cfg.scenario);
  if (std::string(command) == "run") name << '-' << to_string(cfg.strategy);
  name << "-seed" << cfg.seed;
  return root / name.str();
}

void write_metric_tables(const SimLog& log, const fs::path& dir) {
  {
    std::ostringstream os;
    os << "vehicle,total,fixed_branch,relative_branch\n";
    for (std::size_t i = 0; const TriggerCounts& c : trigger_counts(log)) {
      os << ++i << ',' << c.total << ',' << c.fixed_branch << ','
         << c.relative_branch << '\n';
    }
    write_file(dir / "trigger_counts.csv", os.str());
  }
  {
    const SafetyReport safety =
        min_pairwise_distance(log, log.times.front(), log.times.back());
    std::ostringstream os;
    os << "first,second,min_distance,at_time\n";
    os.precision(17);
    for (const PairDistance& p : safety.pairs) {
      os << p.first << ',' << p.second << ',' << p.min_distance << ','
         << p.at_time << '\n';
    }
    write_file(dir / "safety.csv", os.str());
  }
  {
    const auto stats = time_headway(log, log.config.limits.headway_window_start,
                                    log.config.limits.headway_window_end);
    std::ostringstream os;
    os << "vehicle,min,max,range,mean,samples,excluded\n";
    os.precision(17);
    for (const HeadwayStats& h : stats) {
      os << h.vehicle << ',' << h.min_headway << ',' << h.max_headway << ','
         << h.range << ',' << h.mean << ',' << h.sample_count << ','
         << h.excluded_count << '\n';
    }
    write_file(dir / "headway.csv", os.str());

    std::ostringstream series;
    series << "t";
    for (const HeadwayStats& h : stats) series << ",av" << h.vehicle;
    series << '\n';
    series.precision(17);
    if (!stats.empty()) {
      for (std::size_t k = 0; k < stats.front().series.size(); ++k) {
        series << stats.front().series_times[k];
        for (const HeadwayStats& h : stats) {
          series << ',' << (k < h.series.size() ? h.series[k] : 0.0);
        }
        series << '\n';
      }
    }
    write_file(dir / "headway_series.csv", series.str());
  }
}

void write_run_outputs(const SimLog& log, const fs::path& dir,
                       std::size_t decimate) {
  fs::create_directories(dir);
  write_state_csv(log, dir / "log.csv", decimate);
  write_file(dir / "config.json", serialize_config(log.config));
  write_file(dir / "metrics.json", metrics_summary_json(log));
  write_metric_tables(log, dir);
}

void print_run_summary(const SimLog& log) {
  const auto counts = trigger_counts(log);
  std::cout << to_string(log.config.scenario) << '/'
            << to_string(log.config.strategy) << ": "
            << log.record_count() << " records; events per vehicle:";
  for (const TriggerCounts& c : counts) std::cout << ' ' << c.total;
  const SafetyReport safety =
      min_pairwise_distance(log, log.times.front(), log.times.back());
  std::cout << "; min pairwise distance " << safety.overall_min << " m\n";
}

int cmd_run(const CommonOpts& opts) {
  const SimConfig cfg = load_config(opts);
  const SimLog log = run_closed_loop(cfg);
  const fs::path dir = resolve_out_dir(opts, cfg, "run");
  write_run_outputs(log, dir, opts.decimate);
  print_run_summary(log);
  std::cout << "outputs in " << dir.string() << '\n';
  return k_exit_ok;
}

int cmd_compare(const CommonOpts& opts) {
  const SimConfig base = load_config(opts);
  const fs::path dir = resolve_out_dir(opts, base, "compare");
  fs::create_directories(dir);

  constexpr StrategyKind strategies[] = {
      StrategyKind::Continuous, StrategyKind::FixedThreshold,
      StrategyKind::RelativeThreshold, StrategyKind::SwitchedThreshold};

  std::map<StrategyKind, SimLog> logs;
  for (StrategyKind strategy : strategies) {
    SimConfig cfg = base;
    cfg.strategy = strategy;
    SimLog log = run_closed_loop(cfg);
    write_run_outputs(log, dir / to_string(strategy), opts.decimate);
    print_run_summary(log);
    logs.emplace(strategy, std::move(log));
  }

  std::ostringstream os;
  os.precision(17);
  os << "metric,vehicle,continuous,fixed,relative,switched,"
        "switched_fixed_branch,switched_relative_branch\n";
  std::map<StrategyKind, std::vector<TriggerCounts>> counts;
  for (StrategyKind s : strategies) counts[s] = trigger_counts(logs.at(s));
  for (std::size_t i = 0; i < base.vehicle_count; ++i) {
    const TriggerCounts& sw = counts[StrategyKind::SwitchedThreshold][i];
    os << "trigger_count," << i + 1 << ','
       << counts[StrategyKind::Continuous][i].total << ','
       << counts[StrategyKind::FixedThreshold][i].total << ','
       << counts[StrategyKind::RelativeThreshold][i].total << ','
       << sw.total << ',' << sw.fixed_branch << ',' << sw.relative_branch
       << '\n';
  }
  std::map<StrategyKind, std::vector<HeadwayStats>> headway;
  for (StrategyKind s : strategies) {
    headway[s] = time_headway(logs.at(s), base.limits.headway_window_start,
                              base.limits.headway_window_end);
  }
  for (std::size_t f = 0; f + 1 < base.vehicle_count; ++f) {
    os << "headway_range," << f + 2;
    for (StrategyKind s : strategies) os << ',' << headway[s][f].range;
    os << ",,\n";
  }
  os << "min_pairwise_distance,all";
  for (StrategyKind s : strategies) {
    const SimLog& log = logs.at(s);
    os << ','
       << min_pairwise_distance(log, log.times.front(), log.times.back())
              .overall_min;
  }
  os << ",,\n";
  write_file(dir / "compare.csv", os.str());
  std::cout << "comparison table in " << (dir / "compare.csv").string()
            << '\n';
  return k_exit_ok;
}

int cmd_metrics(const CommonOpts& opts, const std::string& log_path) {
  SimConfig cfg = opts.config_path.empty()
                      ? SimConfig::defaults()
                      : parse_config(read_file(opts.config_path));
  const SimLog log = read_state_csv(fs::path(log_path), std::move(cfg));
  const std::string summary = metrics_summary_json(log);
  if (opts.out_dir.empty()) {
    std::cout << summary;
  } else {
    fs::create_directories(opts.out_dir);
    write_file(fs::path(opts.out_dir) / "metrics.json", summary);
    write_metric_tables(log, opts.out_dir);
    std::cout << "metrics in " << opts.out_dir << '\n';
  }
  return k_exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"event-triggered vehicle formation simulator"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  CLI::App* run = app.add_subcommand("run", "run one simulation");
  add_common(run, run_opts);

  CommonOpts compare_opts;
  CLI::App* compare = app.add_subcommand(
      "compare", "run all four strategies on one scenario and seed");
  add_common(compare, compare_opts);

  CommonOpts metrics_opts;
  std::string metrics_log;
  CLI::App* metrics =
      app.add_subcommand("metrics", "recompute metrics from a state log");
  add_common(metrics, metrics_opts, /*with_overrides=*/false);
  metrics->add_option("--log", metrics_log, "state log csv")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (compare->parsed()) return cmd_compare(compare_opts);
    if (metrics->parsed()) return cmd_metrics(metrics_opts, metrics_log);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return k_exit_config;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return k_exit_io;
  } catch (const SimError& e) {
    std::cerr << "run aborted: " << e.what() << '\n';
    return k_exit_aborted;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return k_exit_aborted;
  }
  return k_exit_ok;
}
