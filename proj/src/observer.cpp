#include "formsim/observer.hpp"

namespace formsim {

namespace {

// splitmix64; chosen for bit-stable draws across platforms.
std::uint64_t next_u64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

PositionSampler::PositionSampler(std::uint64_t seed,
                                 std::size_t vehicle_index, double noise_bound)
    : state_(seed ^ (0xA24BAED4963EE407ull *
                     (static_cast<std::uint64_t>(vehicle_index) + 1))),
      bound_(noise_bound) {
  next_u64(state_);  // burn one draw to diffuse the combined seed
}

double PositionSampler::next_signed_unit() {
  const double unit = static_cast<double>(next_u64(state_) >> 11) * 0x1.0p-53;
  return 2.0 * unit - 1.0;
}

Vec2 PositionSampler::sample(const Vec2& true_position) {
  const double nx = bound_ * next_signed_unit();
  const double ny = bound_ * next_signed_unit();
  return {true_position.x + nx, true_position.y + ny};
}

ObserverState observer_step(const ObserverState& obs, const Vec2& u,
                            const Vec2& nn_output, const ObserverGains& gains,
                            double dt) {
  const Vec2 innovation = obs.latest_sample - obs.position_estimate;
  ObserverState next = obs;
  next.position_estimate +=
      (obs.velocity_estimate + gains.position_injection * innovation) * dt;
  next.velocity_estimate +=
      (u + gains.velocity_injection * innovation + nn_output) * dt;
  return next;
}

}  // namespace formsim
