#include "formsim/trigger.hpp"

#include <cmath>

namespace formsim {

const char* to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Continuous:
      return "continuous";
    case StrategyKind::FixedThreshold:
      return "fixed";
    case StrategyKind::RelativeThreshold:
      return "relative";
    case StrategyKind::SwitchedThreshold:
      return "switched";
  }
  return "unknown";
}

std::optional<StrategyKind> strategy_from_string(std::string_view name) {
  if (name == "continuous") return StrategyKind::Continuous;
  if (name == "fixed") return StrategyKind::FixedThreshold;
  if (name == "relative") return StrategyKind::RelativeThreshold;
  if (name == "switched") return StrategyKind::SwitchedThreshold;
  return std::nullopt;
}

Vec2 shaped_control_fixed(const Vec2& mu, const Vec2& velocity_error,
                          const EtcParams& p) {
  const double s = p.fixed_shaping;
  return {mu.x - s * std::tanh(s * velocity_error.x / p.smoothing.x),
          mu.y - s * std::tanh(s * velocity_error.y / p.smoothing.y)};
}

Vec2 shaped_control_relative(const Vec2& mu, const Vec2& velocity_error,
                             const EtcParams& p) {
  const double gain = 1.0 + p.relative_slope;
  const double s = p.relative_shaping;
  const auto axis = [&](double m, double z, double eps) {
    return -gain * (m * std::tanh(m * z / eps) + s * std::tanh(s * z / eps));
  };
  return {axis(mu.x, velocity_error.x, p.smoothing.x),
          axis(mu.y, velocity_error.y, p.smoothing.y)};
}

TriggerBranch active_branch(StrategyKind strategy, const Vec2& held_control,
                            const EtcParams& p) {
  switch (strategy) {
    case StrategyKind::Continuous:
      return TriggerBranch::None;
    case StrategyKind::FixedThreshold:
      return TriggerBranch::Fixed;
    case StrategyKind::RelativeThreshold:
      return TriggerBranch::Relative;
    case StrategyKind::SwitchedThreshold: {
      bool relative_side = held_control.norm() < p.switch_boundary;
      if (p.swap_switch_branches) relative_side = !relative_side;
      return relative_side ? TriggerBranch::Relative : TriggerBranch::Fixed;
    }
  }
  return TriggerBranch::None;
}

bool trigger_condition(StrategyKind strategy, const Vec2& error,
                       const Vec2& held_control, const EtcParams& p) {
  switch (active_branch(strategy, held_control, p)) {
    case TriggerBranch::None:
      return true;
    case TriggerBranch::Fixed:
      return error.norm() >= p.fixed_threshold;
    case TriggerBranch::Relative:
      return error.norm() >=
             p.relative_slope * held_control.norm() + p.relative_floor;
  }
  return true;
}

void hold_update(TriggerState& ts, const Vec2& candidate, bool triggered,
                 TriggerBranch branch, double t) {
  if (!triggered) return;
  ts.held_control = candidate;
  ts.last_event_time = t;
  ts.event_times.push_back(t);
  ts.event_branches.push_back(branch);
}

}  // namespace formsim
