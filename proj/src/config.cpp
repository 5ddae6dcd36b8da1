#include "formsim/config.hpp"

#include <cmath>
#include <initializer_list>
#include <set>

#include <json.hpp>

namespace formsim {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> known) {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) {
      fail(path.empty() ? item.key() : path + "." + item.key(),
           "unknown key");
    }
  }
}

std::string join(const std::string& path, const char* key) {
  return path.empty() ? key : path + "." + key;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

void read_number(const json& obj, const char* key, const std::string& path,
                 double& out) {
  if (auto it = obj.find(key); it != obj.end()) {
    out = as_number(*it, join(path, key));
  }
}

void read_bool(const json& obj, const char* key, const std::string& path,
               bool& out) {
  if (auto it = obj.find(key); it != obj.end()) {
    if (!it->is_boolean()) fail(join(path, key), "expected a boolean");
    out = it->get<bool>();
  }
}

Vec2 as_vec2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) {
    fail(path, "expected an array of two numbers");
  }
  return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
}

void read_vec2(const json& obj, const char* key, const std::string& path,
               Vec2& out) {
  if (auto it = obj.find(key); it != obj.end()) {
    out = as_vec2(*it, join(path, key));
  }
}

void read_diag2(const json& obj, const char* key, const std::string& path,
                Diag2& out) {
  if (auto it = obj.find(key); it != obj.end()) {
    const Vec2 v = as_vec2(*it, join(path, key));
    out = {v.x, v.y};
  }
}

void parse_vehicle_params(const json& j, const std::string& path,
                          VehicleParams& out) {
  expect_object(j, path);
  reject_unknown_keys(j, path,
                      {"mass", "air_density", "cross_section", "drag_coeff",
                       "disturbance_amp", "disturbance_freq",
                       "disturbance_decay"});
  read_number(j, "mass", path, out.mass);
  read_number(j, "air_density", path, out.air_density);
  read_number(j, "cross_section", path, out.cross_section);
  read_number(j, "drag_coeff", path, out.drag_coeff);
  read_number(j, "disturbance_amp", path, out.disturbance_amp);
  read_number(j, "disturbance_freq", path, out.disturbance_freq);
  read_number(j, "disturbance_decay", path, out.disturbance_decay);
}

void parse_initial(const json& j, const std::string& path, VehicleInit& out) {
  expect_object(j, path);
  reject_unknown_keys(j, path,
                      {"position", "velocity", "observer_position",
                       "observer_velocity"});
  read_vec2(j, "position", path, out.state.position);
  read_vec2(j, "velocity", path, out.state.velocity);
  read_vec2(j, "observer_position", path, out.observer.position_estimate);
  read_vec2(j, "observer_velocity", path, out.observer.velocity_estimate);
  out.observer.latest_sample = out.observer.position_estimate;
}

bool divides(double step, double span) {
  if (step <= 0.0 || span <= 0.0) return false;
  const double ratio = span / step;
  return std::abs(ratio - std::round(ratio)) < 1e-6;
}

}  // namespace

SimConfig SimConfig::defaults() {
  SimConfig cfg;
  cfg.vehicles.resize(4);
  cfg.vehicles[0].mass = 1760.0;
  cfg.vehicles[1].mass = 1920.0;
  cfg.vehicles[2].mass = 1660.0;
  cfg.vehicles[3].mass = 1890.0;

  const auto init = [](Vec2 pos, Vec2 vel, Vec2 obs_pos, Vec2 obs_vel) {
    return VehicleInit{{pos, vel}, {obs_pos, obs_vel, obs_pos}};
  };
  cfg.initial = {
      init({28.0, 5.4}, {14.0, 0.0}, {26.0, 5.0}, {12.0, 0.0}),
      init({24.0, 2.0}, {16.0, 0.0}, {22.0, 1.6}, {18.0, 0.0}),
      init({18.0, 9.0}, {16.0, 0.0}, {16.0, 8.6}, {16.0, 0.0}),
      init({12.0, 1.8}, {17.0, 0.0}, {14.0, 1.4}, {14.0, 0.0}),
  };
  cfg.rbf = RbfConfig::defaults();
  return cfg;
}

void SimConfig::validate() const {
  if (vehicle_count < 2) fail("vehicle_count", "need at least two vehicles");
  if (!(duration > 0.0)) fail("duration", "must be positive");
  if (!(dt > 0.0)) fail("dt", "must be positive");
  if (duration > 50.0 + 1e-9) {
    fail("duration", "leader reference profile is defined on [0, 50] s");
  }
  if (!divides(dt, duration)) fail("duration", "must be a multiple of dt");
  if (!(sampler.period > 0.0)) fail("sampler.period", "must be positive");
  if (!divides(dt, sampler.period)) {
    fail("sampler.period", "must be a multiple of dt");
  }
  if (sampler.noise_bound < 0.0) {
    fail("sampler.noise_bound", "must be nonnegative");
  }
  if (vehicles.size() != vehicle_count) {
    fail("vehicles", "need one entry per vehicle (" +
                         std::to_string(vehicle_count) + ")");
  }
  if (initial.size() != vehicle_count) {
    fail("initial", "need one entry per vehicle (" +
                        std::to_string(vehicle_count) + ")");
  }
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const std::string path = "vehicles[" + std::to_string(i) + "]";
    const VehicleParams& p = vehicles[i];
    if (!(p.mass > 0.0)) fail(path + ".mass", "must be positive");
    if (p.air_density < 0.0) fail(path + ".air_density", "must be nonnegative");
    if (p.cross_section < 0.0) {
      fail(path + ".cross_section", "must be nonnegative");
    }
    if (p.drag_coeff < 0.0) fail(path + ".drag_coeff", "must be nonnegative");
  }
  for (std::size_t i = 0; i < initial.size(); ++i) {
    const std::string path = "initial[" + std::to_string(i) + "]";
    if (!initial[i].state.position.finite() ||
        !initial[i].state.velocity.finite() ||
        !initial[i].observer.position_estimate.finite() ||
        !initial[i].observer.velocity_estimate.finite()) {
      fail(path, "all components must be finite");
    }
  }
  if (!observer.position_injection.positive()) {
    fail("observer.position_injection", "diagonal must be positive");
  }
  if (!observer.velocity_injection.positive()) {
    fail("observer.velocity_injection", "diagonal must be positive");
  }
  if (!controller.position_gain.positive()) {
    fail("controller.position_gain", "diagonal must be positive");
  }
  if (!controller.velocity_gain.positive()) {
    fail("controller.velocity_gain", "diagonal must be positive");
  }
  if (!(controller.adapt_rate > 0.0)) {
    fail("controller.adapt_rate", "must be positive");
  }
  if (!(controller.weight_leakage > 0.0)) {
    fail("controller.weight_leakage", "must be positive");
  }
  if (!controller.bound_rate.positive()) {
    fail("controller.bound_rate", "diagonal must be positive");
  }
  if (!controller.bound_leakage.positive()) {
    fail("controller.bound_leakage", "diagonal must be positive");
  }
  if (rbf.centers.empty()) fail("rbf.centers", "need at least one center");
  if (!(rbf.width > 0.0)) fail("rbf.width", "must be positive");
  for (std::size_t a = 0; a < rbf.centers.size(); ++a) {
    for (std::size_t b = a + 1; b < rbf.centers.size(); ++b) {
      if (rbf.centers[a] == rbf.centers[b]) {
        fail("rbf.centers", "centers must be pairwise distinct");
      }
    }
  }
  if (!(etc.fixed_threshold > 0.0)) {
    fail("etc.fixed_threshold", "must be positive");
  }
  if (!(etc.fixed_shaping > etc.fixed_threshold)) {
    fail("etc.fixed_shaping", "must exceed etc.fixed_threshold");
  }
  if (!(etc.smoothing.x > 0.0) || !(etc.smoothing.y > 0.0)) {
    fail("etc.smoothing", "must be positive");
  }
  if (!(etc.relative_slope > 0.0 && etc.relative_slope < 1.0)) {
    fail("etc.relative_slope", "must satisfy 0 < relative_slope < 1");
  }
  if (!(etc.relative_floor > 0.0)) {
    fail("etc.relative_floor", "must be positive");
  }
  const double shaping_floor =
      etc.relative_floor / (1.0 - etc.relative_slope);
  if (!(etc.relative_shaping > shaping_floor)) {
    fail("etc.relative_shaping",
         "must exceed relative_floor/(1-relative_slope) = " +
             std::to_string(shaping_floor));
  }
  if (!(etc.switch_boundary > 0.0)) {
    fail("etc.switch_boundary", "must be positive");
  }
  if (limits.transient < 0.0 || limits.transient >= duration) {
    fail("limits.transient", "must lie in [0, duration)");
  }
  if (!(limits.headway_window_start < limits.headway_window_end)) {
    fail("limits.headway_window_start", "window must be nonempty");
  }
}

Vec2 SimConfig::reference_origin() const {
  if (leader_origin) return *leader_origin;
  return initial.at(0).observer.position_estimate;
}

std::size_t SimConfig::step_count() const {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

std::size_t SimConfig::sample_stride() const {
  return static_cast<std::size_t>(std::llround(sampler.period / dt));
}

SimConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config document: ") + e.what());
  }
  expect_object(root, "");
  reject_unknown_keys(root, "",
                      {"vehicle_count", "duration", "dt", "scenario",
                       "strategy", "seed", "leader_origin", "vehicles",
                       "initial", "sampler", "observer", "controller", "rbf",
                       "etc", "limits"});

  SimConfig cfg = SimConfig::defaults();
  bool sampler_seed_set = false;

  if (auto it = root.find("vehicle_count"); it != root.end()) {
    if (!it->is_number_unsigned()) {
      fail("vehicle_count", "expected an unsigned integer");
    }
    cfg.vehicle_count = it->get<std::size_t>();
  }
  read_number(root, "duration", "", cfg.duration);
  read_number(root, "dt", "", cfg.dt);
  if (auto it = root.find("scenario"); it != root.end()) {
    if (!it->is_string()) fail("scenario", "expected a string");
    const auto kind = scenario_from_string(it->get<std::string>());
    if (!kind) {
      fail("scenario", "expected one of linear, square, linear-queue");
    }
    cfg.scenario = *kind;
  }
  if (auto it = root.find("strategy"); it != root.end()) {
    if (!it->is_string()) fail("strategy", "expected a string");
    const auto kind = strategy_from_string(it->get<std::string>());
    if (!kind) {
      fail("strategy",
           "expected one of continuous, fixed, relative, switched");
    }
    cfg.strategy = *kind;
  }
  if (auto it = root.find("seed"); it != root.end()) {
    if (!it->is_number_unsigned()) fail("seed", "expected an unsigned integer");
    cfg.seed = it->get<std::uint64_t>();
  }
  if (auto it = root.find("leader_origin"); it != root.end()) {
    cfg.leader_origin = as_vec2(*it, "leader_origin");
  }

  if (auto it = root.find("vehicles"); it != root.end()) {
    if (!it->is_array()) fail("vehicles", "expected an array");
    cfg.vehicles.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      VehicleParams p;
      parse_vehicle_params((*it)[i], "vehicles[" + std::to_string(i) + "]", p);
      cfg.vehicles.push_back(p);
    }
  }
  if (auto it = root.find("initial"); it != root.end()) {
    if (!it->is_array()) fail("initial", "expected an array");
    cfg.initial.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      VehicleInit v;
      parse_initial((*it)[i], "initial[" + std::to_string(i) + "]", v);
      cfg.initial.push_back(v);
    }
  }

  if (auto it = root.find("sampler"); it != root.end()) {
    const std::string path = "sampler";
    expect_object(*it, path);
    reject_unknown_keys(*it, path, {"period", "noise_bound", "seed"});
    read_number(*it, "period", path, cfg.sampler.period);
    read_number(*it, "noise_bound", path, cfg.sampler.noise_bound);
    if (auto s = it->find("seed"); s != it->end()) {
      if (!s->is_number_unsigned()) {
        fail("sampler.seed", "expected an unsigned integer");
      }
      cfg.sampler.seed = s->get<std::uint64_t>();
      sampler_seed_set = true;
    }
  }
  if (auto it = root.find("observer"); it != root.end()) {
    const std::string path = "observer";
    expect_object(*it, path);
    reject_unknown_keys(*it, path,
                        {"position_injection", "velocity_injection"});
    read_diag2(*it, "position_injection", path,
               cfg.observer.position_injection);
    read_diag2(*it, "velocity_injection", path,
               cfg.observer.velocity_injection);
  }
  if (auto it = root.find("controller"); it != root.end()) {
    const std::string path = "controller";
    expect_object(*it, path);
    reject_unknown_keys(*it, path,
                        {"position_gain", "velocity_gain", "adapt_rate",
                         "weight_leakage", "bound_rate", "bound_leakage",
                         "bound_prior"});
    read_diag2(*it, "position_gain", path, cfg.controller.position_gain);
    read_diag2(*it, "velocity_gain", path, cfg.controller.velocity_gain);
    read_number(*it, "adapt_rate", path, cfg.controller.adapt_rate);
    read_number(*it, "weight_leakage", path, cfg.controller.weight_leakage);
    read_diag2(*it, "bound_rate", path, cfg.controller.bound_rate);
    read_diag2(*it, "bound_leakage", path, cfg.controller.bound_leakage);
    read_vec2(*it, "bound_prior", path, cfg.controller.bound_prior);
  }
  if (auto it = root.find("rbf"); it != root.end()) {
    const std::string path = "rbf";
    expect_object(*it, path);
    reject_unknown_keys(*it, path, {"centers", "width", "input"});
    if (auto c = it->find("centers"); c != it->end()) {
      if (!c->is_array()) fail("rbf.centers", "expected an array");
      cfg.rbf.centers.clear();
      for (std::size_t k = 0; k < c->size(); ++k) {
        cfg.rbf.centers.push_back(
            as_vec2((*c)[k], "rbf.centers[" + std::to_string(k) + "]"));
      }
    }
    read_number(*it, "width", path, cfg.rbf.width);
    if (auto in = it->find("input"); in != it->end()) {
      if (!in->is_string()) fail("rbf.input", "expected a string");
      const std::string name = in->get<std::string>();
      if (name == "velocity") {
        cfg.rbf.input = RbfConfig::Input::VelocityEstimate;
      } else if (name == "velocity_error") {
        cfg.rbf.input = RbfConfig::Input::VelocityError;
      } else {
        fail("rbf.input", "expected velocity or velocity_error");
      }
    }
  }
  if (auto it = root.find("etc"); it != root.end()) {
    const std::string path = "etc";
    expect_object(*it, path);
    reject_unknown_keys(*it, path,
                        {"fixed_threshold", "fixed_shaping", "smoothing",
                         "relative_slope", "relative_floor",
                         "relative_shaping", "switch_boundary",
                         "swap_switch_branches"});
    read_number(*it, "fixed_threshold", path, cfg.etc.fixed_threshold);
    read_number(*it, "fixed_shaping", path, cfg.etc.fixed_shaping);
    read_vec2(*it, "smoothing", path, cfg.etc.smoothing);
    read_number(*it, "relative_slope", path, cfg.etc.relative_slope);
    read_number(*it, "relative_floor", path, cfg.etc.relative_floor);
    read_number(*it, "relative_shaping", path, cfg.etc.relative_shaping);
    read_number(*it, "switch_boundary", path, cfg.etc.switch_boundary);
    read_bool(*it, "swap_switch_branches", path,
              cfg.etc.swap_switch_branches);
  }
  if (auto it = root.find("limits"); it != root.end()) {
    const std::string path = "limits";
    expect_object(*it, path);
    reject_unknown_keys(
        *it, path,
        {"transient", "headway_window_start", "headway_window_end",
         "observer_position_ceiling", "observer_velocity_ceiling",
         "position_error_ceiling", "velocity_error_ceiling",
         "weight_norm_ceiling", "bound_norm_ceiling"});
    read_number(*it, "transient", path, cfg.limits.transient);
    read_number(*it, "headway_window_start", path,
                cfg.limits.headway_window_start);
    read_number(*it, "headway_window_end", path,
                cfg.limits.headway_window_end);
    read_number(*it, "observer_position_ceiling", path,
                cfg.limits.observer_position_ceiling);
    read_number(*it, "observer_velocity_ceiling", path,
                cfg.limits.observer_velocity_ceiling);
    read_number(*it, "position_error_ceiling", path,
                cfg.limits.position_error_ceiling);
    read_number(*it, "velocity_error_ceiling", path,
                cfg.limits.velocity_error_ceiling);
    read_number(*it, "weight_norm_ceiling", path,
                cfg.limits.weight_norm_ceiling);
    read_number(*it, "bound_norm_ceiling", path,
                cfg.limits.bound_norm_ceiling);
  }

  if (!sampler_seed_set) cfg.sampler.seed = cfg.seed;

  // Shrink the default tables when fewer vehicles are requested; larger
  // formations must spell the extra entries out.
  if (cfg.vehicle_count < cfg.vehicles.size() &&
      root.find("vehicles") == root.end()) {
    cfg.vehicles.resize(cfg.vehicle_count);
  }
  if (cfg.vehicle_count < cfg.initial.size() &&
      root.find("initial") == root.end()) {
    cfg.initial.resize(cfg.vehicle_count);
  }

  cfg.validate();
  return cfg;
}

std::string serialize_config(const SimConfig& cfg) {
  ordered_json root;
  root["vehicle_count"] = cfg.vehicle_count;
  root["duration"] = cfg.duration;
  root["dt"] = cfg.dt;
  root["scenario"] = to_string(cfg.scenario);
  root["strategy"] = to_string(cfg.strategy);
  root["seed"] = cfg.seed;
  if (cfg.leader_origin) {
    root["leader_origin"] = {cfg.leader_origin->x, cfg.leader_origin->y};
  }
  root["vehicles"] = ordered_json::array();
  for (const VehicleParams& p : cfg.vehicles) {
    root["vehicles"].push_back({{"mass", p.mass},
                                {"air_density", p.air_density},
                                {"cross_section", p.cross_section},
                                {"drag_coeff", p.drag_coeff},
                                {"disturbance_amp", p.disturbance_amp},
                                {"disturbance_freq", p.disturbance_freq},
                                {"disturbance_decay", p.disturbance_decay}});
  }
  root["initial"] = ordered_json::array();
  for (const VehicleInit& v : cfg.initial) {
    root["initial"].push_back(
        {{"position", {v.state.position.x, v.state.position.y}},
         {"velocity", {v.state.velocity.x, v.state.velocity.y}},
         {"observer_position",
          {v.observer.position_estimate.x, v.observer.position_estimate.y}},
         {"observer_velocity",
          {v.observer.velocity_estimate.x, v.observer.velocity_estimate.y}}});
  }
  root["sampler"] = {{"period", cfg.sampler.period},
                     {"noise_bound", cfg.sampler.noise_bound},
                     {"seed", cfg.sampler.seed}};
  root["observer"] = {
      {"position_injection",
       {cfg.observer.position_injection.x, cfg.observer.position_injection.y}},
      {"velocity_injection",
       {cfg.observer.velocity_injection.x,
        cfg.observer.velocity_injection.y}}};
  root["controller"] = {
      {"position_gain",
       {cfg.controller.position_gain.x, cfg.controller.position_gain.y}},
      {"velocity_gain",
       {cfg.controller.velocity_gain.x, cfg.controller.velocity_gain.y}},
      {"adapt_rate", cfg.controller.adapt_rate},
      {"weight_leakage", cfg.controller.weight_leakage},
      {"bound_rate",
       {cfg.controller.bound_rate.x, cfg.controller.bound_rate.y}},
      {"bound_leakage",
       {cfg.controller.bound_leakage.x, cfg.controller.bound_leakage.y}},
      {"bound_prior",
       {cfg.controller.bound_prior.x, cfg.controller.bound_prior.y}}};
  ordered_json centers = ordered_json::array();
  for (const Vec2& c : cfg.rbf.centers) centers.push_back({c.x, c.y});
  root["rbf"] = {{"centers", centers},
                 {"width", cfg.rbf.width},
                 {"input", cfg.rbf.input == RbfConfig::Input::VelocityEstimate
                               ? "velocity"
                               : "velocity_error"}};
  root["etc"] = {{"fixed_threshold", cfg.etc.fixed_threshold},
                 {"fixed_shaping", cfg.etc.fixed_shaping},
                 {"smoothing", {cfg.etc.smoothing.x, cfg.etc.smoothing.y}},
                 {"relative_slope", cfg.etc.relative_slope},
                 {"relative_floor", cfg.etc.relative_floor},
                 {"relative_shaping", cfg.etc.relative_shaping},
                 {"switch_boundary", cfg.etc.switch_boundary},
                 {"swap_switch_branches", cfg.etc.swap_switch_branches}};
  root["limits"] = {
      {"transient", cfg.limits.transient},
      {"headway_window_start", cfg.limits.headway_window_start},
      {"headway_window_end", cfg.limits.headway_window_end},
      {"observer_position_ceiling", cfg.limits.observer_position_ceiling},
      {"observer_velocity_ceiling", cfg.limits.observer_velocity_ceiling},
      {"position_error_ceiling", cfg.limits.position_error_ceiling},
      {"velocity_error_ceiling", cfg.limits.velocity_error_ceiling},
      {"weight_norm_ceiling", cfg.limits.weight_norm_ceiling},
      {"bound_norm_ceiling", cfg.limits.bound_norm_ceiling}};
  return root.dump(2) + "\n";
}

}  // namespace formsim
