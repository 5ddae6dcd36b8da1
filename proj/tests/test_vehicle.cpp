#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "formsim/vehicle.hpp"

using namespace formsim;

namespace {

// Small deterministic generator for property checks.
struct TestRng {
  std::uint64_t state;
  double next() {  // uniform on [-1, 1)
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
  }
};

}  // namespace

TEST_CASE("drag is zero at rest") {
  VehicleParams p;
  const Vec2 d = drag_accel({0.0, 0.0}, p);
  CHECK(d.x == 0.0);
  CHECK(d.y == 0.0);
}

TEST_CASE("drag magnitude matches the hand-evaluated coefficient") {
  VehicleParams p;  // mass 1760, H1=1.206, H2=5.58, H3=0.3
  const Vec2 d = drag_accel({10.0, 0.0}, p);
  // 0.5 * 1.206 * 5.58 * 0.3 * 100 / 1760, computed independently
  CHECK(std::abs(-d.x - 0.05735352272727272) < 1e-12 * 0.06);
  CHECK(d.y == 0.0);
}

TEST_CASE("drag is quadratic in speed") {
  VehicleParams p;
  const Vec2 a = drag_accel({3.0, 0.0}, p);
  const Vec2 b = drag_accel({6.0, 0.0}, p);
  CHECK(b.x == doctest::Approx(4.0 * a.x).epsilon(1e-12));
}

TEST_CASE("drag opposes motion and scales as 1/mass") {
  TestRng rng{11};
  for (int trial = 0; trial < 200; ++trial) {
    VehicleParams p;
    p.mass = 800.0 + 1400.0 * std::abs(rng.next());
    const Vec2 v{30.0 * rng.next(), 30.0 * rng.next()};
    const Vec2 d = drag_accel(v, p);
    // odd in each component
    const Vec2 flipped = drag_accel({-v.x, v.y}, p);
    CHECK(flipped.x == -d.x);
    CHECK(flipped.y == d.y);
    // opposes motion
    CHECK(d.x * v.x <= 0.0);
    CHECK(d.y * v.y <= 0.0);
    // 1/mass scaling
    VehicleParams heavier = p;
    heavier.mass = 2.0 * p.mass;
    const Vec2 dh = drag_accel(v, heavier);
    CHECK(dh.x == doctest::Approx(0.5 * d.x).epsilon(1e-12));
    CHECK(dh.y == doctest::Approx(0.5 * d.y).epsilon(1e-12));
  }
}

TEST_CASE("disturbance vanishes at sin zeros") {
  VehicleParams p;
  CHECK(disturbance_accel(0.0, p).x == 0.0);
  const Vec2 d = disturbance_accel(2.5, p);  // sin(5*pi) up to rounding
  CHECK(std::abs(d.x) < 1e-12);
}

TEST_CASE("disturbance matches direct evaluation at t=0.25") {
  VehicleParams p;
  const Vec2 d = disturbance_accel(0.25, p);
  CHECK(std::abs(d.x - 0.2853688273502142) < 1e-12);
  CHECK(d.x == d.y);
}

TEST_CASE("disturbance stays inside its decaying envelope") {
  VehicleParams p;
  TestRng rng{23};
  for (int trial = 0; trial < 500; ++trial) {
    const double t = 50.0 * std::abs(rng.next());
    const Vec2 d = disturbance_accel(t, p);
    CHECK(std::abs(d.x) <= 0.3 * std::exp(-t / 5.0) + 1e-15);
  }
}

TEST_CASE("plant holds an equilibrium at rest with zero input") {
  VehicleParams p;
  const VehicleState s{{3.0, -1.0}, {0.0, 0.0}};
  const VehicleState next = plant_step(s, {0.0, 0.0}, 0.0, 0.001, p);
  CHECK(next.position == s.position);
  CHECK(next.velocity == s.velocity);
}

TEST_CASE("plant integrates uniform motion exactly") {
  VehicleParams p;
  p.air_density = 0.0;     // drag off
  p.disturbance_amp = 0.0;  // disturbance off
  VehicleState s{{0.0, 0.0}, {10.0, 0.0}};
  s = plant_step(s, {0.0, 0.0}, 0.0, 0.001, p);
  CHECK(s.position.x == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(s.velocity.x == 10.0);

  // velocity constant, position linear over many steps
  VehicleState r{{0.0, 0.0}, {-4.0, 2.0}};
  for (int k = 0; k < 1000; ++k) {
    r = plant_step(r, {0.0, 0.0}, k * 0.001, 0.001, p);
  }
  CHECK(r.velocity.x == -4.0);
  CHECK(r.velocity.y == 2.0);
  CHECK(r.position.x == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(r.position.y == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("one Euler step from rest picks up exactly u*dt") {
  VehicleParams p;  // drag=0 at v=0, disturbance=0 at t=0
  const VehicleState s{{0.0, 0.0}, {0.0, 0.0}};
  const VehicleState next = plant_step(s, {1.0, 0.0}, 0.0, 0.001, p);
  CHECK(next.velocity.x == 0.001);
  CHECK(next.velocity.y == 0.0);
  CHECK(next.position.x == 0.0);
}

TEST_CASE("plant step is deterministic") {
  VehicleParams p;
  const VehicleState s{{1.0, 2.0}, {8.0, -0.5}};
  const VehicleState a = plant_step(s, {0.3, 0.1}, 1.75, 0.001, p);
  const VehicleState b = plant_step(s, {0.3, 0.1}, 1.75, 0.001, p);
  CHECK(a.position == b.position);
  CHECK(a.velocity == b.velocity);
}
