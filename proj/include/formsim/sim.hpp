#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "formsim/config.hpp"

namespace formsim {

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything logged for one vehicle at one time instant. States are the
// values at the instant; controls are the ones applied over the following
// step.
struct VehicleStep {
  VehicleState truth;
  ObserverState observer;
  Vec2 ref_position;
  Vec2 position_error;      // z1
  Vec2 velocity_error;      // z2
  Vec2 continuous_control;  // mu
  Vec2 candidate_control;   // w
  Vec2 held_control;        // u
  bool triggered{false};
  TriggerBranch branch{TriggerBranch::None};
  double weight_norm{0.0};
  double bound_norm{0.0};
};

// Complete run record; the sole input to the metrics layer. Records are
// step-major: record (k, i) lives at k * vehicle_count + i.
struct SimLog {
  SimConfig config;
  std::vector<double> times;         // step_count() + 1 instants
  std::vector<VehicleStep> records;  // times.size() * vehicle_count
  std::vector<std::vector<double>> event_times;
  std::vector<std::vector<TriggerBranch>> event_branches;

  std::size_t vehicle_count() const { return config.vehicle_count; }
  std::size_t record_count() const { return times.size(); }
  const VehicleStep& at(std::size_t step, std::size_t vehicle) const {
    return records[step * config.vehicle_count + vehicle];
  }
};

// Runs the closed loop: sample, reference, errors, control shaping, trigger,
// hold, advance. Every vehicle (the leader included) runs the configured
// strategy; an update is forced at t=0 so the hold is defined from the first
// step. Aborts with SimError naming step and vehicle when a state goes
// non-finite.
SimLog run_closed_loop(const SimConfig& config);

// Identical result for any permutation of 0..N-1: per-phase updates read
// only start-of-step state, so the schedule cannot leak into the log.
SimLog run_closed_loop(const SimConfig& config,
                       std::span<const std::size_t> vehicle_order);

}  // namespace formsim
