#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "formsim/observer.hpp"
#include "formsim/reference.hpp"
#include "formsim/vec2.hpp"

namespace formsim {

// Gaussian RBF network layout. The same basis vector feeds both axis blocks;
// weights stay per-axis (no cross-axis coupling).
struct RbfConfig {
  enum class Input { VelocityEstimate, VelocityError };

  std::vector<Vec2> centers;
  double width{4.0};
  Input input{Input::VelocityEstimate};

  std::size_t size() const { return centers.size(); }

  // Five centers spaced along the 0..16 m/s operating envelope.
  static RbfConfig defaults();
};

struct AdaptiveState {
  std::vector<double> weights_x;  // longitudinal weight block
  std::vector<double> weights_y;  // lateral weight block
  Vec2 disturbance_bound;         // adaptive bound on the residual error

  // Frobenius norm over both weight blocks.
  double weight_norm() const;
};

struct ControllerGains {
  Diag2 position_gain{0.5, 0.5};   // backstepping position loop
  Diag2 velocity_gain{20.0, 20.0};  // velocity loop
  double adapt_rate{1.0};           // uniform diagonal learning rate
  double weight_leakage{0.01};
  Diag2 bound_rate{0.2, 0.2};      // disturbance-bound adaptation rate
  Diag2 bound_leakage{2.0, 2.0};   // pull toward the prior
  Vec2 bound_prior{0.0, 0.0};
};

struct TrackingErrors {
  Vec2 position_error;         // z1: estimate minus reference position
  Vec2 velocity_error;         // z2: residual after the virtual control
  Vec2 virtual_velocity;       // backstepping virtual control
  Vec2 virtual_velocity_rate;  // its analytic time derivative
};

std::vector<double> rbf_basis(const Vec2& input, const RbfConfig& cfg);
void rbf_basis_into(const Vec2& input, const RbfConfig& cfg,
                    std::span<double> out);

// Per-axis dot product of the weight blocks with the basis vector. Throws
// std::invalid_argument on a dimension mismatch.
Vec2 nn_output(const AdaptiveState& state, std::span<const double> basis);

// Backstepping errors and virtual control. The derivative of the virtual
// control is computed analytically through the observer's position dynamics,
// avoiding numerical differentiation of noisy estimates.
TrackingErrors tracking_errors(const ObserverState& obs,
                               const ReferenceSignal& ref,
                               const Diag2& position_injection,
                               const Diag2& position_gain);

// Continuous-time control: feedback on both errors, the network's drag
// estimate, a sign-switched disturbance-bound term, and the reference
// feedforward.
Vec2 continuous_control(const TrackingErrors& errs, const AdaptiveState& state,
                        std::span<const double> basis,
                        const Vec2& ref_acceleration,
                        const ControllerGains& gains);

// Explicit-Euler update of the weight blocks and the disturbance bound.
AdaptiveState adapt_step(const AdaptiveState& state,
                         std::span<const double> basis,
                         const Vec2& velocity_error,
                         const ControllerGains& gains, double dt);

}  // namespace formsim
