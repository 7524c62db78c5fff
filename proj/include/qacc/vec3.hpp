#pragma once

#include <cmath>
#include <string>

#include "qacc/errors.hpp"

namespace qacc {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

inline constexpr double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline constexpr double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }

inline double max_abs_diff(const Vec3& a, const Vec3& b) {
  return std::fmax(std::fabs(a.x - b.x), std::fmax(std::fabs(a.y - b.y), std::fabs(a.z - b.z)));
}

inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

/// Magnetic-field-like vector h (energy) or its rate hdot (energy / time).
using FieldVector3 = Vec3;

/// Unit vector a with rho = (1 + a . sigma) / 2.
class BlochVector {
 public:
  static constexpr double unit_tol = 1e-9;

  BlochVector() : v_{0.0, 0.0, 1.0} {}

  /// Accepts v with | |v| - 1 | <= tol and renormalizes it.
  explicit BlochVector(const Vec3& v, double tol = unit_tol) {
    const double n = norm(v);
    if (!std::isfinite(n) || !(std::fabs(n - 1.0) <= tol)) {
      throw NormError("Bloch vector must have unit norm, got |a| = " + std::to_string(n));
    }
    v_ = v * (1.0 / n);
  }

  BlochVector(double x, double y, double z) : BlochVector(Vec3{x, y, z}) {}

  /// Projects any nonzero finite vector onto the sphere.
  static BlochVector normalized(const Vec3& v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) throw NormError("cannot normalize a zero Bloch vector");
    return BlochVector(v * (1.0 / n), 1e-6);
  }

  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }  // NOLINT(google-explicit-constructor)

  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }

 private:
  Vec3 v_;
};

}  // namespace qacc
