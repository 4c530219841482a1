#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace renormlab {

// First-order forward-mode jet: a value together with its gradient with
// respect to the three coordinates of the outermost evaluation point.
// Arithmetic is exact to round-off, so composed maps carry exact Jacobians.
struct Jet {
  double v = 0.0;
  std::array<double, 3> g{0.0, 0.0, 0.0};

  Jet() = default;
  Jet(double value) : v(value) {}
  Jet(double value, double gx, double gy, double gz) : v(value), g{gx, gy, gz} {}

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int i = 0; i < 3; ++i) g[i] += o.g[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int i = 0; i < 3; ++i) g[i] -= o.g[i];
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    for (int i = 0; i < 3; ++i) g[i] = g[i] * o.v + v * o.g[i];
    v *= o.v;
    return *this;
  }
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, const Jet& b) { return a *= b; }
inline Jet operator-(const Jet& a) { return {-a.v, -a.g[0], -a.g[1], -a.g[2]}; }

inline Jet operator/(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v / b.v;
  const double ib = 1.0 / b.v;
  for (int i = 0; i < 3; ++i) r.g[i] = (a.g[i] - r.v * b.g[i]) * ib;
  return r;
}

inline Jet operator+(const Jet& a, double c) { return {a.v + c, a.g[0], a.g[1], a.g[2]}; }
inline Jet operator+(double c, const Jet& a) { return a + c; }
inline Jet operator-(const Jet& a, double c) { return a + (-c); }
inline Jet operator-(double c, const Jet& a) { return {c - a.v, -a.g[0], -a.g[1], -a.g[2]}; }
inline Jet operator*(const Jet& a, double c) { return {a.v * c, a.g[0] * c, a.g[1] * c, a.g[2] * c}; }
inline Jet operator*(double c, const Jet& a) { return a * c; }
inline Jet operator/(const Jet& a, double c) { return a * (1.0 / c); }
inline Jet operator/(double c, const Jet& a) { return Jet(c) / a; }

// Chain rule for a scalar function with known derivative.
inline Jet apply_unary(const Jet& a, double value, double deriv) {
  return {value, deriv * a.g[0], deriv * a.g[1], deriv * a.g[2]};
}

inline Jet sin(const Jet& a) { return apply_unary(a, std::sin(a.v), std::cos(a.v)); }
inline Jet cos(const Jet& a) { return apply_unary(a, std::cos(a.v), -std::sin(a.v)); }
inline Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return apply_unary(a, e, e);
}
inline Jet log(const Jet& a) { return apply_unary(a, std::log(a.v), 1.0 / a.v); }
inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return apply_unary(a, s, 0.5 / s);
}
inline Jet abs(const Jet& a) { return a.v < 0.0 ? -a : a; }

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double c, const Vec3& a) { return {c * a.x, c * a.y, c * a.z}; }

inline double norm(const Vec3& a) { return std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z); }
inline double norm_inf(const Vec3& a) {
  return std::max(std::abs(a.x), std::max(std::abs(a.y), std::abs(a.z)));
}
inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }

struct Mat3 {
  // Row-major: m[row][col].
  std::array<std::array<double, 3>, 3> m{};

  static Mat3 identity() {
    Mat3 r;
    r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
    return r;
  }
};

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a.m[i][k] * b.m[k][j];
      r.m[i][j] = s;
    }
  return r;
}

inline Vec3 operator*(const Mat3& a, const Vec3& w) {
  Vec3 r;
  for (int i = 0; i < 3; ++i)
    r[i] = a.m[i][0] * w.x + a.m[i][1] * w.y + a.m[i][2] * w.z;
  return r;
}

inline double det(const Mat3& a) {
  return a.m[0][0] * (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) -
         a.m[0][1] * (a.m[1][0] * a.m[2][2] - a.m[1][2] * a.m[2][0]) +
         a.m[0][2] * (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]);
}

inline double max_abs_entry(const Mat3& a) {
  double r = 0.0;
  for (const auto& row : a.m)
    for (double e : row) r = std::max(r, std::abs(e));
  return r;
}

// A point in R^3 whose coordinates carry jets.
using JetPoint = std::array<Jet, 3>;

// Seed with the identity Jacobian: derivatives are taken w.r.t. this point.
inline JetPoint seed(const Vec3& w) {
  return {Jet{w.x, 1.0, 0.0, 0.0}, Jet{w.y, 0.0, 1.0, 0.0}, Jet{w.z, 0.0, 0.0, 1.0}};
}

// Seed with zero gradients (plain evaluation through jet-typed code).
inline JetPoint seed_value(const Vec3& w) {
  return {Jet{w.x}, Jet{w.y}, Jet{w.z}};
}

inline Vec3 value_of(const JetPoint& p) { return {p[0].v, p[1].v, p[2].v}; }

inline Mat3 jacobian_of(const JetPoint& p) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = p[i].g[j];
  return r;
}

}  // namespace renormlab
