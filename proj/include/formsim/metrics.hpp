#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "formsim/sim.hpp"

namespace formsim {

struct TriggerCounts {
  std::size_t total{0};
  std::size_t fixed_branch{0};
  std::size_t relative_branch{0};
};

// Per-vehicle event counts; for the switched strategy the total splits into
// the two branch counts.
std::vector<TriggerCounts> trigger_counts(const SimLog& log);

struct PairDistance {
  std::size_t first;   // 1-based vehicle ids
  std::size_t second;
  double min_distance;
  double at_time;
};

struct SafetyReport {
  double window_start;
  double window_end;
  std::vector<PairDistance> pairs;
  double overall_min;
};

// Minimum center-to-center Euclidean distance per unordered vehicle pair,
// over true positions within [t0, t1]. Throws std::invalid_argument on an
// empty window.
SafetyReport min_pairwise_distance(const SimLog& log, double t0, double t1);

struct HeadwayStats {
  std::size_t vehicle;  // 1-based follower id
  double min_headway;
  double max_headway;
  double range;
  double mean;
  std::size_t sample_count;
  std::size_t excluded_count;  // instants with nonpositive follower speed
  std::vector<double> series;
  std::vector<double> series_times;
};

// Time headway per follower: longitudinal center gap to the predecessor
// divided by the follower's longitudinal speed, over [t0, t1]. Instants with
// nonpositive speed are excluded and counted; a window with no valid instant
// throws std::invalid_argument.
std::vector<HeadwayStats> time_headway(const SimLog& log, double t0,
                                       double t1);

struct VehicleBounds {
  double observer_position_error{0.0};  // sup ||x_hat - x||, post-transient
  double observer_velocity_error{0.0};
  double position_error{0.0};           // sup ||z1||
  double velocity_error{0.0};           // sup ||z2||
  double weight_norm{0.0};
  double bound_norm{0.0};
  std::optional<double> min_event_interval;
  std::size_t event_count{0};
  bool within_ceilings{true};
};

struct BoundednessReport {
  double transient;
  std::vector<VehicleBounds> per_vehicle;
  bool all_finite{true};
  bool within_ceilings{true};
  bool zeno_ok{true};  // min inter-event interval >= dt for every vehicle
  bool pass{false};
};

// Sup norms after the configured transient, the Zeno check, and a whole-run
// finiteness scan, judged against the configured ceilings.
BoundednessReport boundedness_report(const SimLog& log);

// The run summary document: trigger_counts, safety, headway and boundedness
// sections, serialized at full precision.
std::string metrics_summary_json(const SimLog& log);

}  // namespace formsim
