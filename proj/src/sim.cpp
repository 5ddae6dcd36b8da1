#include "formsim/sim.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace formsim {

namespace {

bool step_finite(const VehicleStep& r) {
  return r.truth.position.finite() && r.truth.velocity.finite() &&
         r.observer.position_estimate.finite() &&
         r.observer.velocity_estimate.finite() && r.position_error.finite() &&
         r.velocity_error.finite() && r.continuous_control.finite() &&
         r.candidate_control.finite() && r.held_control.finite() &&
         std::isfinite(r.weight_norm) && std::isfinite(r.bound_norm);
}

Vec2 shaped_candidate(StrategyKind strategy, TriggerBranch branch,
                      const Vec2& mu, const Vec2& velocity_error,
                      const EtcParams& etc) {
  if (strategy == StrategyKind::Continuous) return mu;
  return branch == TriggerBranch::Relative
             ? shaped_control_relative(mu, velocity_error, etc)
             : shaped_control_fixed(mu, velocity_error, etc);
}

}  // namespace

SimLog run_closed_loop(const SimConfig& config) {
  std::vector<std::size_t> order(config.vehicle_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return run_closed_loop(config, order);
}

SimLog run_closed_loop(const SimConfig& config,
                       std::span<const std::size_t> vehicle_order) {
  config.validate();
  const std::size_t n = config.vehicle_count;
  if (vehicle_order.size() != n) {
    throw SimError("vehicle_order must cover every vehicle exactly once");
  }

  const std::size_t steps = config.step_count();
  const std::size_t sample_stride = config.sample_stride();
  const double dt = config.dt;
  const Vec2 origin = config.reference_origin();
  const FormationOffsets offsets = scenario_offsets(config.scenario, n);
  const std::size_t basis_size = config.rbf.size();

  std::vector<VehicleState> states(n);
  std::vector<ObserverState> observers(n);
  std::vector<AdaptiveState> adaptive(n);
  std::vector<TriggerState> triggers(n);
  std::vector<PositionSampler> samplers;
  samplers.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    states[i] = config.initial[i].state;
    observers[i] = config.initial[i].observer;
    adaptive[i].weights_x.assign(basis_size, 0.0);
    adaptive[i].weights_y.assign(basis_size, 0.0);
    adaptive[i].disturbance_bound = config.controller.bound_prior;
    samplers.emplace_back(config.sampler.seed, i, config.sampler.noise_bound);
  }

  SimLog log;
  log.config = config;
  log.times.resize(steps + 1);
  log.records.resize((steps + 1) * n);

  // Per-step scratch, allocated once.
  std::vector<ReferenceSignal> refs(n);
  std::vector<TrackingErrors> errs(n);
  std::vector<Vec2> mu(n);
  std::vector<Vec2> candidate(n);
  std::vector<TriggerBranch> branch(n);
  std::vector<bool> fired(n);
  std::vector<double> basis_store(n * basis_size);

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const bool final_record = (k == steps);
    log.times[k] = t;

    // Measurements arrive on the sampling grid and are held between samples.
    if (!final_record && k % sample_stride == 0) {
      for (std::size_t i : vehicle_order) {
        observers[i].latest_sample = samplers[i].sample(states[i].position);
      }
    }

    // References: the leader tracks the speed profile, followers hang off
    // their predecessor's start-of-step position estimate. Observer states
    // are not advanced until the end of the step, so reads here are
    // order-independent.
    const ReferenceSignal leader = leader_reference(t, origin);
    for (std::size_t i : vehicle_order) {
      refs[i] = (i == 0) ? leader
                         : follower_reference(
                               i + 1, observers[i - 1].position_estimate,
                               offsets, leader);
    }

    for (std::size_t i : vehicle_order) {
      errs[i] = tracking_errors(observers[i], refs[i],
                                config.observer.position_injection,
                                config.controller.position_gain);
      const Vec2 net_input = config.rbf.input == RbfConfig::Input::VelocityError
                                 ? errs[i].velocity_error
                                 : observers[i].velocity_estimate;
      std::span<double> basis{basis_store.data() + i * basis_size, basis_size};
      rbf_basis_into(net_input, config.rbf, basis);
      mu[i] = continuous_control(errs[i], adaptive[i], basis,
                                 refs[i].acceleration, config.controller);
      branch[i] = active_branch(config.strategy, triggers[i].held_control,
                                config.etc);
      candidate[i] =
          shaped_candidate(config.strategy, branch[i], mu[i],
                           errs[i].velocity_error, config.etc);
    }

    if (!final_record) {
      for (std::size_t i : vehicle_order) {
        const Vec2 error = candidate[i] - triggers[i].held_control;
        const bool fire =
            k == 0 || trigger_condition(config.strategy, error,
                                        triggers[i].held_control, config.etc);
        hold_update(triggers[i], candidate[i], fire, branch[i], t);
        fired[i] = fire;
      }
    } else {
      for (std::size_t i : vehicle_order) fired[i] = false;
    }

    for (std::size_t i : vehicle_order) {
      VehicleStep& rec = log.records[k * n + i];
      rec.truth = states[i];
      rec.observer = observers[i];
      rec.ref_position = refs[i].position;
      rec.position_error = errs[i].position_error;
      rec.velocity_error = errs[i].velocity_error;
      rec.continuous_control = mu[i];
      rec.candidate_control = candidate[i];
      rec.held_control = triggers[i].held_control;
      rec.triggered = fired[i];
      rec.branch = fired[i] ? branch[i] : TriggerBranch::None;
      rec.weight_norm = adaptive[i].weight_norm();
      rec.bound_norm = adaptive[i].disturbance_bound.norm();
      if (!step_finite(rec)) {
        throw SimError("non-finite state at step " + std::to_string(k) +
                       " (t=" + std::to_string(t) + " s), vehicle " +
                       std::to_string(i + 1));
      }
    }

    if (final_record) break;

    // Advance plants, observers and adaptation with the held control; all
    // derivatives are evaluated at the step's start.
    for (std::size_t i : vehicle_order) {
      const Vec2& u = triggers[i].held_control;
      std::span<const double> basis{basis_store.data() + i * basis_size,
                                    basis_size};
      const Vec2 nn = nn_output(adaptive[i], basis);
      states[i] = plant_step(states[i], u, t, dt, config.vehicles[i]);
      observers[i] =
          observer_step(observers[i], u, nn, config.observer, dt);
      adaptive[i] = adapt_step(adaptive[i], basis, errs[i].velocity_error,
                               config.controller, dt);
    }
  }

  log.event_times.resize(n);
  log.event_branches.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    log.event_times[i] = triggers[i].event_times;
    log.event_branches[i] = triggers[i].event_branches;
  }
  return log;
}

}  // namespace formsim
