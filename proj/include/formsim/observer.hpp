#pragma once

#include <cstdint>

#include "formsim/vec2.hpp"

namespace formsim {

struct SamplerConfig {
  double period{0.01};       // s between position samples; a multiple of dt
  double noise_bound{0.05};  // m, per-axis half-width of the uniform noise
  std::uint64_t seed{1};
};

struct ObserverGains {
  Diag2 position_injection{5.0, 5.0};    // 1/s
  Diag2 velocity_injection{50.0, 50.0};  // 1/s^2
};

struct ObserverState {
  Vec2 position_estimate;
  Vec2 velocity_estimate;
  Vec2 latest_sample;  // zero-order-held measurement
};

// Deterministic per-vehicle measurement noise. The stream depends only on
// (seed, vehicle_index), never on call order across vehicles, so draws are
// identical under any per-vehicle execution schedule.
class PositionSampler {
 public:
  PositionSampler(std::uint64_t seed, std::size_t vehicle_index,
                  double noise_bound);

  // True position plus per-axis noise uniform on [-bound, bound].
  Vec2 sample(const Vec2& true_position);

 private:
  double next_signed_unit();  // uniform on [-1, 1)

  std::uint64_t state_;
  double bound_;
};

// One explicit-Euler step of the sampling-based observer: the position
// estimate is corrected through the held sample, the velocity estimate
// through the same innovation plus the applied control and the network's
// drag estimate.
ObserverState observer_step(const ObserverState& obs, const Vec2& u,
                            const Vec2& nn_output, const ObserverGains& gains,
                            double dt);

}  // namespace formsim
