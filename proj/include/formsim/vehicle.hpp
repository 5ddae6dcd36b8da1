#pragma once

#include <numbers>

#include "formsim/vec2.hpp"

namespace formsim {

struct VehicleParams {
  double mass{1760.0};          // kg
  double air_density{1.206};    // kg/m^3
  double cross_section{5.58};   // m^2
  double drag_coeff{0.3};       // dimensionless
  double disturbance_amp{0.3};  // m/s^2
  double disturbance_freq{2.0 * std::numbers::pi};  // rad/s
  double disturbance_decay{0.2};                    // 1/s
};

struct VehicleState {
  Vec2 position;  // m
  Vec2 velocity;  // m/s
};

// Quadratic aerodynamic drag as acceleration, opposing motion on each axis.
Vec2 drag_accel(const Vec2& velocity, const VehicleParams& params);

// Decaying sinusoidal disturbance acceleration, identical on both axes.
Vec2 disturbance_accel(double t, const VehicleParams& params);

// One explicit-Euler step of the point-mass plant; drag and disturbance are
// evaluated at the step's start.
VehicleState plant_step(const VehicleState& state, const Vec2& u, double t,
                        double dt, const VehicleParams& params);

}  // namespace formsim
