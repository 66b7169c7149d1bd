#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace flowlab {

// The lab works in the plane; 1-D objects live on declared lines through it.
inline constexpr int kDim = 2;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2 operator-() const { return {-x, -y}; }

  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

inline Vec2 unit(const Vec2& v) {
  const double n = v.norm();
  if (n == 0.0) throw std::domain_error("unit(): zero vector");
  return v / n;
}

// Axis-aligned box.
struct Box {
  Vec2 lo;
  Vec2 hi;

  bool contains(const Vec2& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double area() const { return width() * height(); }
  Vec2 center() const { return {(lo.x + hi.x) / 2, (lo.y + hi.y) / 2}; }
  Box expanded(double m) const { return {{lo.x - m, lo.y - m}, {hi.x + m, hi.y + m}}; }
};

inline constexpr double kPi = 3.14159265358979323846;

// H^k measure of the ball of radius r in a k-plane, k = 1, 2.
inline double ball_measure(int k, double r) {
  switch (k) {
    case 1: return 2.0 * r;
    case 2: return kPi * r * r;
    default: throw std::domain_error("ball_measure: k must be 1 or 2");
  }
}

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace flowlab
