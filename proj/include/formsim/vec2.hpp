#pragma once

#include <cmath>

namespace formsim {

// Longitudinal/lateral component pair. Carries positions, velocities,
// accelerations and control signals throughout the simulator.
struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;

  constexpr double norm_sq() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm_sq()); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Positive diagonal 2x2 matrix, the only matrix shape the controller uses.
struct Diag2 {
  double x{1.0};
  double y{1.0};

  constexpr Vec2 operator*(const Vec2& v) const { return {x * v.x, y * v.y}; }
  constexpr bool positive() const { return x > 0.0 && y > 0.0; }
  constexpr bool operator==(const Diag2&) const = default;
};

// Signum with sgn(0) = 0, so sign-switched terms vanish at the equilibrium.
constexpr double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace formsim
