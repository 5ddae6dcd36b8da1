#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "formsim/vec2.hpp"

namespace formsim {

enum class StrategyKind {
  Continuous,
  FixedThreshold,
  RelativeThreshold,
  SwitchedThreshold
};

const char* to_string(StrategyKind kind);
std::optional<StrategyKind> strategy_from_string(std::string_view name);

// Which threshold rule shaped and gated an update. Values match the
// strategy_branch column of the state log.
enum class TriggerBranch { None = 0, Fixed = 1, Relative = 2 };

struct EtcParams {
  double fixed_threshold{2.0};
  double fixed_shaping{2.5};     // must exceed fixed_threshold
  Vec2 smoothing{0.5, 0.5};      // per-axis tanh sharpness
  double relative_slope{0.9};    // in (0,1)
  double relative_floor{0.1};
  double relative_shaping{2.0};  // must exceed floor/(1-slope)
  double switch_boundary{0.55};
  // Flips which rule pairs with small/large held controls, for sensitivity
  // studies of the switched strategy.
  bool swap_switch_branches{false};
};

struct TriggerState {
  Vec2 held_control;
  double last_event_time{-1.0};
  std::vector<double> event_times;
  std::vector<TriggerBranch> event_branches;

  std::size_t event_count() const { return event_times.size(); }
};

// Candidate control for the fixed-threshold rule: the continuous control
// minus a saturating term in the velocity error.
Vec2 shaped_control_fixed(const Vec2& mu, const Vec2& velocity_error,
                          const EtcParams& p);

// Candidate control for the relative-threshold rule.
Vec2 shaped_control_relative(const Vec2& mu, const Vec2& velocity_error,
                             const EtcParams& p);

// Rule in force given the currently held control. The switched strategy uses
// the relative rule below the boundary and the fixed rule at or above it.
TriggerBranch active_branch(StrategyKind strategy, const Vec2& held_control,
                            const EtcParams& p);

// True when the measurement error (candidate minus held control) demands an
// update. Continuous always updates. Norms are Euclidean.
bool trigger_condition(StrategyKind strategy, const Vec2& error,
                       const Vec2& held_control, const EtcParams& p);

// Zero-order hold: replaces the held control and records the event only when
// triggered.
void hold_update(TriggerState& ts, const Vec2& candidate, bool triggered,
                 TriggerBranch branch, double t);

}  // namespace formsim
