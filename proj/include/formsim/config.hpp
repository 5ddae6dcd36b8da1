#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "formsim/adaptive.hpp"
#include "formsim/observer.hpp"
#include "formsim/reference.hpp"
#include "formsim/trigger.hpp"
#include "formsim/vehicle.hpp"

namespace formsim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Post-transient windows and ceilings for the boundedness report. The
// ceilings were pinned from a continuous-strategy baseline run with the
// default parameters, with roughly 2x headroom.
struct BoundednessLimits {
  double transient{20.0};  // s; sup norms taken over t >= transient
  double headway_window_start{35.0};
  double headway_window_end{50.0};
  double observer_position_ceiling{0.2};   // sup ||x_hat - x||
  double observer_velocity_ceiling{0.6};   // sup ||v_hat - v||
  double position_error_ceiling{0.5};      // sup ||z1||
  double velocity_error_ceiling{0.3};      // sup ||z2||
  double weight_norm_ceiling{3.0};
  double bound_norm_ceiling{0.1};
};

struct VehicleInit {
  VehicleState state;
  ObserverState observer;
};

struct SimConfig {
  std::size_t vehicle_count{4};
  double duration{50.0};  // s
  double dt{0.001};       // s
  ScenarioKind scenario{ScenarioKind::Linear};
  StrategyKind strategy{StrategyKind::FixedThreshold};
  std::uint64_t seed{1};

  // Start of the leader's reference trajectory; defaults to the leader's
  // initial position estimate when unset.
  std::optional<Vec2> leader_origin;

  std::vector<VehicleParams> vehicles;  // one entry per vehicle
  std::vector<VehicleInit> initial;     // one entry per vehicle

  SamplerConfig sampler;
  ObserverGains observer;
  ControllerGains controller;
  RbfConfig rbf;
  EtcParams etc;
  BoundednessLimits limits;

  // Four-vehicle setup with the published masses, initial conditions and
  // gains.
  static SimConfig defaults();

  // Throws ConfigError naming the offending field.
  void validate() const;

  Vec2 reference_origin() const;
  std::size_t step_count() const;     // integration steps (records - 1)
  std::size_t sample_stride() const;  // steps between position samples
};

// Strict JSON parsing: omitted fields take the defaults, unknown keys are
// rejected, invariant violations name the field path.
SimConfig parse_config(const std::string& text);

// Emits JSON that parse_config reads back to an identical config.
std::string serialize_config(const SimConfig& config);

}  // namespace formsim
