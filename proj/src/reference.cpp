#include "formsim/reference.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace formsim {

namespace {
constexpr double k_profile_end = 50.0;
constexpr double k_time_slack = 1e-9;
}  // namespace

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Linear:
      return "linear";
    case ScenarioKind::Square:
      return "square";
    case ScenarioKind::LinearQueue:
      return "linear-queue";
  }
  return "unknown";
}

std::optional<ScenarioKind> scenario_from_string(std::string_view name) {
  if (name == "linear") return ScenarioKind::Linear;
  if (name == "square") return ScenarioKind::Square;
  if (name == "linear-queue") return ScenarioKind::LinearQueue;
  return std::nullopt;
}

ReferenceSignal leader_reference(double t, const Vec2& origin) {
  if (t < -k_time_slack || t > k_profile_end + k_time_slack) {
    throw std::out_of_range("leader_reference: t=" + std::to_string(t) +
                            " outside the [0, 50] s profile");
  }
  double vx;
  double ax;
  double px;
  if (t < 25.0) {
    vx = 10.0;
    ax = 0.0;
    px = 10.0 * t;
  } else if (t < 31.0) {
    const double s = t - 25.0;
    vx = 10.0 - s;
    ax = -1.0;
    px = 250.0 + 10.0 * s - 0.5 * s * s;
  } else {
    vx = 4.0;
    ax = 0.0;
    px = 292.0 + 4.0 * (t - 31.0);
  }
  return {{origin.x + px, origin.y}, {vx, 0.0}, {ax, 0.0}};
}

ReferenceSignal follower_reference(std::size_t vehicle,
                                   const Vec2& predecessor_position,
                                   const FormationOffsets& offsets,
                                   const ReferenceSignal& leader) {
  if (vehicle < 2) {
    throw std::invalid_argument(
        "follower_reference: vehicle 1 is the leader; use leader_reference");
  }
  if (vehicle > offsets.gaps.size()) {
    throw std::invalid_argument("follower_reference: vehicle " +
                                std::to_string(vehicle) +
                                " has no formation offset");
  }
  return {predecessor_position - offsets.gaps[vehicle - 1], leader.velocity,
          leader.acceleration};
}

FormationOffsets scenario_offsets(ScenarioKind kind,
                                  std::size_t vehicle_count) {
  static constexpr std::array<Vec2, 3> square{{{0.0, 3.6}, {10.0, -3.6}, {0.0, 3.6}}};
  static constexpr std::array<Vec2, 3> queue{{{10.0, 0.0}, {20.0, 0.0}, {10.0, 0.0}}};

  FormationOffsets offsets;
  offsets.gaps.reserve(vehicle_count);
  offsets.gaps.push_back({0.0, 0.0});
  for (std::size_t follower = 0; follower + 1 < vehicle_count; ++follower) {
    switch (kind) {
      case ScenarioKind::Linear:
        offsets.gaps.push_back({10.0, 0.0});
        break;
      case ScenarioKind::Square:
        offsets.gaps.push_back(square[follower % square.size()]);
        break;
      case ScenarioKind::LinearQueue:
        offsets.gaps.push_back(queue[follower % queue.size()]);
        break;
    }
  }
  return offsets;
}

}  // namespace formsim
