#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "formsim/vec2.hpp"

namespace formsim {

enum class ScenarioKind { Linear, Square, LinearQueue };

const char* to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_from_string(std::string_view name);

// Expected inter-vehicle offsets. gaps[i] is the offset of vehicle i+1 behind
// its predecessor; gaps[0] is always (0,0) for the leader.
struct FormationOffsets {
  std::vector<Vec2> gaps;
};

struct ReferenceSignal {
  Vec2 position;      // m
  Vec2 velocity;      // m/s
  Vec2 acceleration;  // m/s^2
};

// Leader speed profile: 10 m/s cruise, a -1 m/s^2 braking ramp over [25,31) s,
// then 4 m/s until 50 s. Position is the exact piecewise integral from
// `origin`; lateral reference is constant. Throws std::out_of_range outside
// [0, 50] s.
ReferenceSignal leader_reference(double t, const Vec2& origin);

// Reference for follower `vehicle` (1-based, >= 2): position is the observed
// predecessor position minus the formation offset; velocity and acceleration
// chain down from the leader profile. Throws std::invalid_argument for the
// leader.
ReferenceSignal follower_reference(std::size_t vehicle,
                                   const Vec2& predecessor_position,
                                   const FormationOffsets& offsets,
                                   const ReferenceSignal& leader);

// Offsets for the requested scenario; follower patterns repeat cyclically
// when vehicle_count exceeds four.
FormationOffsets scenario_offsets(ScenarioKind kind,
                                  std::size_t vehicle_count = 4);

}  // namespace formsim
