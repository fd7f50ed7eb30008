#pragma once

#include <cmath>

namespace gbflow {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x, double y) : x(x), y(y) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }

  // Anticlockwise rotation through pi/2; the normal convention for tangents.
  Vec2 rot90() const { return {-y, x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Symmetric 2x2 matrix, stored as the three independent entries.
struct SymMat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double trace() const { return xx + yy; }
  // Frobenius inner product A : B.
  double contract(const SymMat2& o) const {
    return xx * o.xx + 2.0 * xy * o.xy + yy * o.yy;
  }
};

}  // namespace gbflow
