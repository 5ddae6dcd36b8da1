#include "formsim/vehicle.hpp"

#include <cmath>

namespace formsim {

Vec2 drag_accel(const Vec2& velocity, const VehicleParams& params) {
  const double c = 0.5 * params.air_density * params.cross_section *
                   params.drag_coeff / params.mass;
  return {-c * velocity.x * velocity.x * sgn(velocity.x),
          -c * velocity.y * velocity.y * sgn(velocity.y)};
}

Vec2 disturbance_accel(double t, const VehicleParams& params) {
  const double a = params.disturbance_amp *
                   std::sin(params.disturbance_freq * t) *
                   std::exp(-params.disturbance_decay * t);
  return {a, a};
}

VehicleState plant_step(const VehicleState& state, const Vec2& u, double t,
                        double dt, const VehicleParams& params) {
  const Vec2 accel =
      u + drag_accel(state.velocity, params) + disturbance_accel(t, params);
  return {state.position + state.velocity * dt, state.velocity + accel * dt};
}

}  // namespace formsim
