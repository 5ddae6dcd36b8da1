#include "formsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace formsim {

namespace {

// First/last record indices whose time lies in [t0, t1].
std::pair<std::size_t, std::size_t> window_indices(const SimLog& log,
                                                   double t0, double t1) {
  if (!(t0 < t1)) {
    throw std::invalid_argument("metrics window must satisfy t0 < t1");
  }
  const auto& times = log.times;
  const auto lo = std::lower_bound(times.begin(), times.end(), t0 - 1e-12);
  const auto hi = std::upper_bound(times.begin(), times.end(), t1 + 1e-12);
  if (lo >= hi) {
    throw std::invalid_argument("metrics window contains no records");
  }
  return {static_cast<std::size_t>(lo - times.begin()),
          static_cast<std::size_t>(hi - times.begin())};
}

}  // namespace

std::vector<TriggerCounts> trigger_counts(const SimLog& log) {
  std::vector<TriggerCounts> counts(log.vehicle_count());
  for (std::size_t i = 0; i < log.vehicle_count(); ++i) {
    counts[i].total = log.event_times[i].size();
    for (TriggerBranch b : log.event_branches[i]) {
      if (b == TriggerBranch::Fixed) ++counts[i].fixed_branch;
      if (b == TriggerBranch::Relative) ++counts[i].relative_branch;
    }
  }
  return counts;
}

SafetyReport min_pairwise_distance(const SimLog& log, double t0, double t1) {
  const auto [begin, end] = window_indices(log, t0, t1);
  SafetyReport report{t0, t1, {}, std::numeric_limits<double>::infinity()};
  const std::size_t n = log.vehicle_count();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      PairDistance pair{i + 1, j + 1,
                        std::numeric_limits<double>::infinity(), t0};
      for (std::size_t k = begin; k < end; ++k) {
        const double d =
            (log.at(k, i).truth.position - log.at(k, j).truth.position)
                .norm();
        if (d < pair.min_distance) {
          pair.min_distance = d;
          pair.at_time = log.times[k];
        }
      }
      report.overall_min = std::min(report.overall_min, pair.min_distance);
      report.pairs.push_back(pair);
    }
  }
  return report;
}

std::vector<HeadwayStats> time_headway(const SimLog& log, double t0,
                                       double t1) {
  const auto [begin, end] = window_indices(log, t0, t1);
  std::vector<HeadwayStats> stats;
  for (std::size_t i = 1; i < log.vehicle_count(); ++i) {
    HeadwayStats s;
    s.vehicle = i + 1;
    s.min_headway = std::numeric_limits<double>::infinity();
    s.max_headway = -std::numeric_limits<double>::infinity();
    s.mean = 0.0;
    s.sample_count = 0;
    s.excluded_count = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const double gap = log.at(k, i - 1).truth.position.x -
                         log.at(k, i).truth.position.x;
      const double speed = log.at(k, i).truth.velocity.x;
      if (speed <= 0.0) {
        ++s.excluded_count;
        continue;
      }
      const double headway = gap / speed;
      s.series.push_back(headway);
      s.series_times.push_back(log.times[k]);
      s.min_headway = std::min(s.min_headway, headway);
      s.max_headway = std::max(s.max_headway, headway);
      s.mean += headway;
      ++s.sample_count;
    }
    if (s.sample_count == 0) {
      throw std::invalid_argument(
          "time_headway: vehicle " + std::to_string(s.vehicle) +
          " has no positive-speed instants in the window");
    }
    s.mean /= static_cast<double>(s.sample_count);
    s.range = s.max_headway - s.min_headway;
    stats.push_back(std::move(s));
  }
  return stats;
}

BoundednessReport boundedness_report(const SimLog& log) {
  const BoundednessLimits& limits = log.config.limits;
  BoundednessReport report;
  report.transient = limits.transient;
  report.per_vehicle.resize(log.vehicle_count());

  for (std::size_t k = 0; k < log.record_count(); ++k) {
    const bool post_transient = log.times[k] >= limits.transient;
    for (std::size_t i = 0; i < log.vehicle_count(); ++i) {
      const VehicleStep& rec = log.at(k, i);
      VehicleBounds& b = report.per_vehicle[i];
      const bool finite =
          rec.truth.position.finite() && rec.truth.velocity.finite() &&
          rec.observer.position_estimate.finite() &&
          rec.observer.velocity_estimate.finite() &&
          rec.position_error.finite() && rec.velocity_error.finite() &&
          rec.held_control.finite() && std::isfinite(rec.weight_norm) &&
          std::isfinite(rec.bound_norm);
      if (!finite) report.all_finite = false;
      if (!post_transient) continue;
      b.observer_position_error = std::max(
          b.observer_position_error,
          (rec.observer.position_estimate - rec.truth.position).norm());
      b.observer_velocity_error = std::max(
          b.observer_velocity_error,
          (rec.observer.velocity_estimate - rec.truth.velocity).norm());
      b.position_error = std::max(b.position_error, rec.position_error.norm());
      b.velocity_error = std::max(b.velocity_error, rec.velocity_error.norm());
      b.weight_norm = std::max(b.weight_norm, rec.weight_norm);
      b.bound_norm = std::max(b.bound_norm, rec.bound_norm);
    }
  }

  const double dt = log.config.dt;
  for (std::size_t i = 0; i < log.vehicle_count(); ++i) {
    VehicleBounds& b = report.per_vehicle[i];
    const auto& events = log.event_times[i];
    b.event_count = events.size();
    for (std::size_t k = 1; k < events.size(); ++k) {
      const double interval = events[k] - events[k - 1];
      if (!b.min_event_interval || interval < *b.min_event_interval) {
        b.min_event_interval = interval;
      }
    }
    if (b.min_event_interval &&
        *b.min_event_interval < dt * (1.0 - 1e-9)) {
      report.zeno_ok = false;
    }
    b.within_ceilings =
        b.observer_position_error <= limits.observer_position_ceiling &&
        b.observer_velocity_error <= limits.observer_velocity_ceiling &&
        b.position_error <= limits.position_error_ceiling &&
        b.velocity_error <= limits.velocity_error_ceiling &&
        b.weight_norm <= limits.weight_norm_ceiling &&
        b.bound_norm <= limits.bound_norm_ceiling;
    if (!b.within_ceilings) report.within_ceilings = false;
  }
  report.pass =
      report.all_finite && report.within_ceilings && report.zeno_ok;
  return report;
}

std::string metrics_summary_json(const SimLog& log) {
  using nlohmann::ordered_json;
  const BoundednessLimits& limits = log.config.limits;

  ordered_json root;
  root["scenario"] = to_string(log.config.scenario);
  root["strategy"] = to_string(log.config.strategy);
  root["seed"] = log.config.seed;
  root["step_count"] = log.config.step_count();

  ordered_json counts = ordered_json::array();
  for (std::size_t i = 0; const TriggerCounts& c : trigger_counts(log)) {
    counts.push_back({{"vehicle", i + 1},
                      {"total", c.total},
                      {"fixed_branch", c.fixed_branch},
                      {"relative_branch", c.relative_branch}});
    ++i;
  }
  root["trigger_counts"] = counts;

  const SafetyReport safety =
      min_pairwise_distance(log, log.times.front(), log.times.back());
  ordered_json pairs = ordered_json::array();
  for (const PairDistance& p : safety.pairs) {
    pairs.push_back({{"first", p.first},
                     {"second", p.second},
                     {"min_distance", p.min_distance},
                     {"at_time", p.at_time}});
  }
  root["safety"] = {{"window", {safety.window_start, safety.window_end}},
                    {"pairs", pairs},
                    {"overall_min", safety.overall_min}};

  ordered_json headway = ordered_json::array();
  for (const HeadwayStats& h :
       time_headway(log, limits.headway_window_start,
                    limits.headway_window_end)) {
    headway.push_back({{"vehicle", h.vehicle},
                       {"min", h.min_headway},
                       {"max", h.max_headway},
                       {"range", h.range},
                       {"mean", h.mean},
                       {"samples", h.sample_count},
                       {"excluded", h.excluded_count}});
  }
  root["headway"] = {
      {"window", {limits.headway_window_start, limits.headway_window_end}},
      {"per_follower", headway}};

  const BoundednessReport bounds = boundedness_report(log);
  ordered_json per_vehicle = ordered_json::array();
  for (std::size_t i = 0; const VehicleBounds& b : bounds.per_vehicle) {
    ordered_json entry = {
        {"vehicle", i + 1},
        {"observer_position_error", b.observer_position_error},
        {"observer_velocity_error", b.observer_velocity_error},
        {"position_error", b.position_error},
        {"velocity_error", b.velocity_error},
        {"weight_norm", b.weight_norm},
        {"bound_norm", b.bound_norm},
        {"event_count", b.event_count},
        {"within_ceilings", b.within_ceilings}};
    if (b.min_event_interval) {
      entry["min_event_interval"] = *b.min_event_interval;
    } else {
      entry["min_event_interval"] = nullptr;
    }
    per_vehicle.push_back(entry);
    ++i;
  }
  root["boundedness"] = {{"transient", bounds.transient},
                         {"per_vehicle", per_vehicle},
                         {"all_finite", bounds.all_finite},
                         {"within_ceilings", bounds.within_ceilings},
                         {"zeno_ok", bounds.zeno_ok},
                         {"pass", bounds.pass}};
  return root.dump(2) + "\n";
}

}  // namespace formsim
