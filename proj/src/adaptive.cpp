#include "formsim/adaptive.hpp"

#include <cmath>
#include <stdexcept>

namespace formsim {

RbfConfig RbfConfig::defaults() {
  RbfConfig cfg;
  cfg.centers = {{0.0, 0.0}, {4.0, 0.0}, {8.0, 0.0}, {12.0, 0.0}, {16.0, 0.0}};
  cfg.width = 4.0;
  return cfg;
}

double AdaptiveState::weight_norm() const {
  double sum = 0.0;
  for (double w : weights_x) sum += w * w;
  for (double w : weights_y) sum += w * w;
  return std::sqrt(sum);
}

void rbf_basis_into(const Vec2& input, const RbfConfig& cfg,
                    std::span<double> out) {
  if (out.size() != cfg.centers.size()) {
    throw std::invalid_argument("rbf_basis_into: output size mismatch");
  }
  const double inv_w2 = 1.0 / (cfg.width * cfg.width);
  for (std::size_t k = 0; k < cfg.centers.size(); ++k) {
    const Vec2 d = input - cfg.centers[k];
    out[k] = std::exp(-d.norm_sq() * inv_w2);
  }
}

std::vector<double> rbf_basis(const Vec2& input, const RbfConfig& cfg) {
  std::vector<double> basis(cfg.centers.size());
  rbf_basis_into(input, cfg, basis);
  return basis;
}

Vec2 nn_output(const AdaptiveState& state, std::span<const double> basis) {
  if (basis.size() != state.weights_x.size() ||
      basis.size() != state.weights_y.size()) {
    throw std::invalid_argument("nn_output: basis/weight dimension mismatch");
  }
  Vec2 out;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    out.x += state.weights_x[k] * basis[k];
    out.y += state.weights_y[k] * basis[k];
  }
  return out;
}

TrackingErrors tracking_errors(const ObserverState& obs,
                               const ReferenceSignal& ref,
                               const Diag2& position_injection,
                               const Diag2& position_gain) {
  TrackingErrors e;
  e.position_error = obs.position_estimate - ref.position;
  e.virtual_velocity = -(position_gain * e.position_error);
  e.velocity_error =
      obs.velocity_estimate - ref.velocity - e.virtual_velocity;
  // d/dt of the position estimate per the observer dynamics.
  const Vec2 estimate_rate =
      obs.velocity_estimate +
      position_injection * (obs.latest_sample - obs.position_estimate);
  e.virtual_velocity_rate = -(position_gain * (estimate_rate - ref.velocity));
  return e;
}

Vec2 continuous_control(const TrackingErrors& errs, const AdaptiveState& state,
                        std::span<const double> basis,
                        const Vec2& ref_acceleration,
                        const ControllerGains& gains) {
  const Vec2& z2 = errs.velocity_error;
  const Vec2 nn = nn_output(state, basis);
  const Vec2 switched{sgn(z2.x) * state.disturbance_bound.x,
                      sgn(z2.y) * state.disturbance_bound.y};
  return -(gains.velocity_gain * z2) - errs.position_error - nn - switched +
         errs.virtual_velocity_rate + ref_acceleration;
}

AdaptiveState adapt_step(const AdaptiveState& state,
                         std::span<const double> basis,
                         const Vec2& velocity_error,
                         const ControllerGains& gains, double dt) {
  if (basis.size() != state.weights_x.size() ||
      basis.size() != state.weights_y.size()) {
    throw std::invalid_argument("adapt_step: basis/weight dimension mismatch");
  }
  AdaptiveState next = state;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    next.weights_x[k] += gains.adapt_rate *
                         (basis[k] * velocity_error.x -
                          gains.weight_leakage * state.weights_x[k]) *
                         dt;
    next.weights_y[k] += gains.adapt_rate *
                         (basis[k] * velocity_error.y -
                          gains.weight_leakage * state.weights_y[k]) *
                         dt;
  }
  const Vec2 rectified{std::abs(velocity_error.x), std::abs(velocity_error.y)};
  next.disturbance_bound +=
      gains.bound_rate *
      (rectified -
       gains.bound_leakage * (state.disturbance_bound - gains.bound_prior)) *
      dt;
  return next;
}

}  // namespace formsim
