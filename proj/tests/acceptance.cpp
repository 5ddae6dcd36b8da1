// Acceptance suite: runs the full 4-vehicle, 50 s experiment matrix with the
// default parameters and checks every shipped claim at its stated tolerance,
// printing one line per criterion.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "formsim/log_io.hpp"
#include "formsim/metrics.hpp"
#include "formsim/sim.hpp"

using namespace formsim;

namespace {

struct HeadwayWindowStats {
  double mean;
  double range;
};

// Everything the criteria need from one run; the log itself is dropped to
// keep twelve 50 s runs from pinning ~0.5 GB.
struct RunDigest {
  std::vector<TriggerCounts> counts;
  double min_pairwise;
  std::vector<double> gap_error;      // sup |gap - expected| per follower, t>20
  std::vector<double> lane_error;     // sup |y - leader lane| per vehicle, t>20
  std::vector<HeadwayWindowStats> headway_cruise;   // 20-24 s per follower
  std::vector<HeadwayWindowStats> headway_settled;  // 35-50 s per follower
  std::vector<std::optional<double>> min_event_interval;
  bool bounded_pass;
  bool all_finite;
  double wall_seconds;
};

using RunKey = std::pair<ScenarioKind, StrategyKind>;

SimConfig default_run(ScenarioKind scenario, StrategyKind strategy) {
  SimConfig cfg = SimConfig::defaults();
  cfg.scenario = scenario;
  cfg.strategy = strategy;
  return cfg;
}

RunDigest digest(const SimLog& log, double wall_seconds) {
  RunDigest d;
  d.wall_seconds = wall_seconds;
  d.counts = trigger_counts(log);
  d.min_pairwise =
      min_pairwise_distance(log, log.times.front(), log.times.back())
          .overall_min;

  const std::size_t n = log.vehicle_count();
  const double lane = log.config.reference_origin().y;
  const FormationOffsets offsets =
      scenario_offsets(log.config.scenario, n);
  d.gap_error.assign(n - 1, 0.0);
  d.lane_error.assign(n, 0.0);
  for (std::size_t k = 0; k < log.record_count(); ++k) {
    if (log.times[k] <= 20.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (log.config.scenario == ScenarioKind::Linear) {
        d.lane_error[i] =
            std::max(d.lane_error[i],
                     std::abs(log.at(k, i).truth.position.y - lane));
      }
      if (i > 0) {
        const double gap = log.at(k, i - 1).truth.position.x -
                           log.at(k, i).truth.position.x;
        d.gap_error[i - 1] = std::max(
            d.gap_error[i - 1], std::abs(gap - offsets.gaps[i].x));
      }
    }
  }

  for (const HeadwayStats& h : time_headway(log, 20.0, 24.0)) {
    d.headway_cruise.push_back({h.mean, h.range});
  }
  for (const HeadwayStats& h : time_headway(log, 35.0, 50.0)) {
    d.headway_settled.push_back({h.mean, h.range});
  }

  const BoundednessReport bounds = boundedness_report(log);
  d.bounded_pass = bounds.pass;
  d.all_finite = bounds.all_finite;
  for (const VehicleBounds& b : bounds.per_vehicle) {
    d.min_event_interval.push_back(b.min_event_interval);
  }
  return d;
}

class Suite {
 public:
  int failures() const { return failures_; }

  void report(int id, const std::string& name, bool pass,
              const std::string& detail) {
    std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", id,
                name.c_str(), detail.c_str());
    if (!pass) ++failures_;
  }

 private:
  int failures_ = 0;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

bool near_rel(double value, double expected, double rel_tol) {
  return std::abs(value - expected) <= rel_tol * std::abs(expected);
}

}  // namespace

int main() {
  constexpr std::array<ScenarioKind, 3> scenarios{
      ScenarioKind::Linear, ScenarioKind::Square, ScenarioKind::LinearQueue};
  constexpr std::array<StrategyKind, 4> strategies{
      StrategyKind::Continuous, StrategyKind::FixedThreshold,
      StrategyKind::RelativeThreshold, StrategyKind::SwitchedThreshold};

  std::map<RunKey, RunDigest> digests;
  for (ScenarioKind scenario : scenarios) {
    for (StrategyKind strategy : strategies) {
      const SimConfig cfg = default_run(scenario, strategy);
      const auto start = std::chrono::steady_clock::now();
      const SimLog log = run_closed_loop(cfg);
      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        start)
              .count();
      digests.emplace(RunKey{scenario, strategy}, digest(log, wall));
      std::printf("run %-12s %-10s: %.2f s wall\n", to_string(scenario),
                  to_string(strategy), wall);
    }
  }

  Suite suite;
  const std::size_t steps = SimConfig::defaults().step_count();

  // 1. Continuous baseline: exactly one update per step per vehicle.
  {
    bool pass = true;
    std::size_t worst = 0;
    for (ScenarioKind scenario : scenarios) {
      for (const TriggerCounts& c :
           digests.at({scenario, StrategyKind::Continuous}).counts) {
        if (c.total != steps) pass = false;
        worst = std::max(worst, c.total);
      }
    }
    suite.report(1, "continuous baseline count", pass,
                 "expected " + std::to_string(steps) + " updates/vehicle, saw " +
                     std::to_string(worst));
  }

  // 2. ETC reduction on the linear scenario.
  {
    bool below = true;
    bool fixed_reduction = true;
    std::ostringstream detail;
    for (StrategyKind strategy :
         {StrategyKind::FixedThreshold, StrategyKind::RelativeThreshold,
          StrategyKind::SwitchedThreshold}) {
      for (const TriggerCounts& c :
           digests.at({ScenarioKind::Linear, strategy}).counts) {
        if (c.total >= steps) below = false;
      }
    }
    detail << "fixed counts";
    for (const TriggerCounts& c :
         digests.at({ScenarioKind::Linear, StrategyKind::FixedThreshold})
             .counts) {
      if (c.total > (steps * 7) / 10) fixed_reduction = false;
      detail << ' ' << c.total;
    }
    detail << " of " << steps;
    suite.report(2, "event-triggered reduction", below && fixed_reduction,
                 detail.str());
  }

  // 3. Follower trigger-count ordering and the switched branch split.
  {
    const auto& fixed =
        digests.at({ScenarioKind::Linear, StrategyKind::FixedThreshold}).counts;
    const auto& relative =
        digests.at({ScenarioKind::Linear, StrategyKind::RelativeThreshold})
            .counts;
    const auto& switched =
        digests.at({ScenarioKind::Linear, StrategyKind::SwitchedThreshold})
            .counts;
    bool pass = true;
    std::ostringstream detail;
    for (std::size_t i = 1; i < 4; ++i) {
      if (!(fixed[i].total < switched[i].total &&
            switched[i].total < relative[i].total)) {
        pass = false;
      }
      detail << " av" << i + 1 << ' ' << fixed[i].total << '<'
             << switched[i].total << '<' << relative[i].total;
    }
    for (std::size_t i = 0; i < 4; ++i) {
      if (switched[i].total !=
          switched[i].fixed_branch + switched[i].relative_branch) {
        pass = false;
      }
    }
    suite.report(3, "trigger-count ordering", pass, detail.str());
  }

  // 4. Tracking convergence on the linear scenario for every strategy.
  {
    bool pass = true;
    double worst_gap = 0.0;
    double worst_lane = 0.0;
    for (StrategyKind strategy : strategies) {
      const RunDigest& d = digests.at({ScenarioKind::Linear, strategy});
      for (double g : d.gap_error) worst_gap = std::max(worst_gap, g);
      for (double l : d.lane_error) worst_lane = std::max(worst_lane, l);
    }
    pass = worst_gap <= 0.5 && worst_lane <= 0.3;
    suite.report(4, "tracking convergence", pass,
                 "worst gap error " + fmt(worst_gap) +
                     " m (limit 0.5), worst lane error " + fmt(worst_lane) +
                     " m (limit 0.3)");
  }

  // 5. Safety distances per scenario.
  {
    bool pass = true;
    std::ostringstream detail;
    for (ScenarioKind scenario : scenarios) {
      double scenario_min = 1e300;
      for (StrategyKind strategy : strategies) {
        scenario_min = std::min(
            scenario_min, digests.at({scenario, strategy}).min_pairwise);
      }
      const double floor =
          scenario == ScenarioKind::Square ? 3.4 : 5.0;
      if (scenario_min <= floor) pass = false;
      detail << ' ' << to_string(scenario) << ' ' << fmt(scenario_min)
             << " m (floor " << fmt(floor) << ")";
    }
    detail << "; square converged design gap 3.6 m";
    suite.report(5, "safety distances", pass, detail.str());
  }

  // 6. Headway transition from 1.0 s to 2.5 s on the linear scenario.
  {
    bool pass = true;
    double worst_cruise = 1.0;
    double worst_settled = 2.5;
    for (StrategyKind strategy : strategies) {
      const RunDigest& d = digests.at({ScenarioKind::Linear, strategy});
      for (const HeadwayWindowStats& h : d.headway_cruise) {
        if (!near_rel(h.mean, 1.0, 0.10)) pass = false;
        if (std::abs(h.mean - 1.0) > std::abs(worst_cruise - 1.0)) {
          worst_cruise = h.mean;
        }
      }
      for (const HeadwayWindowStats& h : d.headway_settled) {
        if (!near_rel(h.mean, 2.5, 0.10)) pass = false;
        if (std::abs(h.mean - 2.5) > std::abs(worst_settled - 2.5)) {
          worst_settled = h.mean;
        }
      }
    }
    suite.report(6, "headway transition", pass,
                 "worst 20-24 s mean " + fmt(worst_cruise) +
                     " s (1.0 +/- 10%), worst 35-50 s mean " +
                     fmt(worst_settled) + " s (2.5 +/- 10%)");
  }

  // 7. Headway-variation ordering over 35-50 s.
  {
    const auto range_of = [&](StrategyKind strategy, std::size_t follower) {
      return digests.at({ScenarioKind::Linear, strategy})
          .headway_settled[follower]
          .range;
    };
    bool pass = true;
    std::ostringstream detail;
    for (std::size_t f = 0; f < 3; ++f) {
      const double cont = range_of(StrategyKind::Continuous, f);
      const double fixed = range_of(StrategyKind::FixedThreshold, f);
      const double relative = range_of(StrategyKind::RelativeThreshold, f);
      const double switched = range_of(StrategyKind::SwitchedThreshold, f);
      if (!(cont < switched && switched < relative && switched < fixed)) {
        pass = false;
      }
      detail << " av" << f + 2 << " c=" << fmt(cont) << " s=" << fmt(switched)
             << " r=" << fmt(relative) << " f=" << fmt(fixed);
    }
    suite.report(7, "headway-variation ordering", pass, detail.str());
  }

  // 8. Zeno exclusion for every event-triggered run.
  {
    bool pass = true;
    double floor_seen = 1e300;
    const double dt = SimConfig::defaults().dt;
    for (ScenarioKind scenario : scenarios) {
      for (StrategyKind strategy :
           {StrategyKind::FixedThreshold, StrategyKind::RelativeThreshold,
            StrategyKind::SwitchedThreshold}) {
        const RunDigest& d = digests.at({scenario, strategy});
        for (std::size_t i = 0; i < d.counts.size(); ++i) {
          if (d.counts[i].total == 0 || d.counts[i].total > steps) {
            pass = false;
          }
          if (d.min_event_interval[i]) {
            floor_seen = std::min(floor_seen, *d.min_event_interval[i]);
            if (*d.min_event_interval[i] < dt * (1.0 - 1e-9)) pass = false;
          }
        }
      }
    }
    suite.report(8, "Zeno exclusion", pass,
                 "min inter-event interval " + fmt(floor_seen) + " s >= dt " +
                     fmt(dt) + " s");
  }

  // 9. Boundedness suite across all 12 runs.
  {
    bool pass = true;
    int failing = 0;
    for (const auto& [key, d] : digests) {
      if (!d.bounded_pass || !d.all_finite) {
        pass = false;
        ++failing;
      }
    }
    suite.report(9, "boundedness suite", pass,
                 pass ? "all 12 runs inside ceilings, no non-finite values"
                      : std::to_string(failing) + " of 12 runs failed");
  }

  // 10. Unit-level oracles at 1e-12 relative tolerance.
  {
    bool pass = true;
    std::ostringstream detail;
    const auto check_rel = [&](const char* name, double value,
                               double expected) {
      const double tol = 1e-12 * std::max(1.0, std::abs(expected));
      if (std::abs(value - expected) > tol) {
        pass = false;
        detail << ' ' << name << " off by " << fmt(value - expected);
      }
    };
    check_rel("drag", -drag_accel({10.0, 0.0}, VehicleParams{}).x,
              0.05735352272727272);
    check_rel("disturbance", disturbance_accel(0.25, VehicleParams{}).x,
              0.2853688273502142);
    check_rel("leader_pos", leader_reference(40.0, {0.0, 0.0}).position.x,
              328.0);
    const RbfConfig rbf = RbfConfig::defaults();
    check_rel("rbf",
              rbf_basis({rbf.centers[0].x + rbf.width, 0.0}, rbf)[0],
              0.36787944117144233);
    {
      const ObserverState obs{{2.0, -1.0}, {0.0, 0.0}, {2.0, -1.0}};
      const ReferenceSignal ref{};
      const auto e = tracking_errors(obs, ref, {5.0, 5.0}, {0.5, 0.5});
      check_rel("virtual_x", e.virtual_velocity.x, -1.0);
      check_rel("virtual_y", e.virtual_velocity.y, 0.5);
    }
    {
      AdaptiveState state;
      state.weights_x.assign(5, 0.0);
      state.weights_y.assign(5, 0.0);
      state.disturbance_bound = {0.2, 0.2};
      const std::vector<double> basis(5, 0.0);
      TrackingErrors errs{};
      errs.velocity_error = {0.5, 0.0};
      check_rel("mu",
                continuous_control(errs, state, basis, {0.0, 0.0},
                                   ControllerGains{})
                    .x,
                -10.2);
    }
    check_rel("shaped_fixed",
              shaped_control_fixed({1.0, 0.0}, {0.5, 0.0}, EtcParams{}).x,
              -1.4665357453785757);
    check_rel("shaped_relative",
              shaped_control_relative({-10.2, 0.0}, {0.5, 0.0}, EtcParams{}).x,
              -23.04330475073602);
    {
      const EtcParams p;
      if (trigger_condition(StrategyKind::FixedThreshold, {1.9, 0.0},
                            {0.0, 0.0}, p) ||
          !trigger_condition(StrategyKind::FixedThreshold, {2.0, 0.0},
                             {0.0, 0.0}, p) ||
          trigger_condition(StrategyKind::RelativeThreshold, {0.09, 0.0},
                            {0.0, 0.0}, p) ||
          !trigger_condition(StrategyKind::RelativeThreshold, {0.11, 0.0},
                             {0.0, 0.0}, p) ||
          active_branch(StrategyKind::SwitchedThreshold, {0.54, 0.0}, p) !=
              TriggerBranch::Relative ||
          active_branch(StrategyKind::SwitchedThreshold, {0.56, 0.0}, p) !=
              TriggerBranch::Fixed) {
        pass = false;
        detail << " trigger-condition table mismatch";
      }
    }
    // analytic virtual-control rate vs finite differences on the leader,
    // away from sample instants and profile kinks
    {
      SimConfig cfg = default_run(ScenarioKind::Linear,
                                  StrategyKind::Continuous);
      cfg.duration = 20.0;
      cfg.limits.transient = 10.0;
      cfg.limits.headway_window_start = 15.0;
      cfg.limits.headway_window_end = 20.0;
      const SimLog log = run_closed_loop(cfg);
      const std::size_t stride = cfg.sample_stride();
      double worst = 0.0;
      for (std::size_t k = 10000; k + 1 < 15000; ++k) {
        if (k % stride == 0 || (k + 1) % stride == 0) continue;
        const VehicleStep& cur = log.at(k, 0);
        const VehicleStep& next = log.at(k + 1, 0);
        const Diag2 k1 = cfg.controller.position_gain;
        const Vec2 alpha_cur = -(k1 * cur.position_error);
        const Vec2 alpha_next = -(k1 * next.position_error);
        const Vec2 fd = (alpha_next - alpha_cur) * (1.0 / cfg.dt);
        const ReferenceSignal ref = leader_reference(log.times[k],
                                                     cfg.reference_origin());
        const Vec2 est_rate =
            cur.observer.velocity_estimate +
            cfg.observer.position_injection *
                (cur.observer.latest_sample - cur.observer.position_estimate);
        const Vec2 rate = -(k1 * (est_rate - ref.velocity));
        worst = std::max({worst, std::abs(fd.x - rate.x),
                          std::abs(fd.y - rate.y)});
      }
      if (worst > 10.0 * cfg.dt) {
        pass = false;
        detail << " virtual-rate fd error " << fmt(worst);
      } else {
        detail << " virtual-rate fd error " << fmt(worst) << " <= "
               << fmt(10.0 * cfg.dt);
      }
    }
    suite.report(10, "unit-level oracles", pass,
                 pass ? "all frozen values matched" + detail.str()
                      : detail.str());
  }

  // 11. Determinism, including schedule permutations.
  {
    const SimConfig cfg =
        default_run(ScenarioKind::Linear, StrategyKind::SwitchedThreshold);
    const SimLog first = run_closed_loop(cfg);
    const SimLog second = run_closed_loop(cfg);
    const std::array<std::size_t, 4> reversed{3, 2, 1, 0};
    const SimLog permuted = run_closed_loop(cfg, reversed);

    std::ostringstream csv_a;
    std::ostringstream csv_b;
    std::ostringstream csv_c;
    write_state_csv(first, csv_a);
    write_state_csv(second, csv_b);
    write_state_csv(permuted, csv_c);
    const bool logs_equal =
        csv_a.str() == csv_b.str() && csv_a.str() == csv_c.str();
    const bool metrics_equal =
        metrics_summary_json(first) == metrics_summary_json(second) &&
        metrics_summary_json(first) == metrics_summary_json(permuted);
    suite.report(11, "determinism", logs_equal && metrics_equal,
                 "repeat run and reversed vehicle schedule byte-identical: " +
                     std::string(logs_equal && metrics_equal ? "yes" : "no"));
  }

  if (suite.failures() == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", suite.failures());
  return 1;
}
