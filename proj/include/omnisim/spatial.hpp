#pragma once

#include <array>
#include <cmath>

// Spatial math used throughout the simulator.
//
// Frame conventions (see docs/conventions.md):
//   - Inertial frame: right-handed, z-axis points up.
//   - Body frame: right-handed, x forward, y right, z down (toward the belly).
//   - Quaternions are Hamilton convention, scalar-first, and map body-frame
//     vectors into the inertial frame. "Level" flight is therefore the
//     quaternion (0, 1, 0, 0) (a half turn about the shared x axis), not the
//     identity.

namespace omnisim {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double squared_norm() const { return dot(*this); }
  double norm() const { return std::sqrt(squared_norm()); }
  Vec3 normalized() const {
    const double n = norm();
    return n > 0.0 ? *this / n : Vec3{};
  }
  bool all_finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// 3x3 matrix, row-major. Used both for rotation matrices and for the inertia
// tensor; rotation-producing functions guarantee orthonormality.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return Mat3{}; }
  static Mat3 diagonal(double a, double b, double c) {
    return Mat3{{a, 0, 0, 0, b, 0, 0, 0, c}};
  }
  static Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    return Mat3{{c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z}};
  }

  double operator()(int r, int c) const { return m[3 * r + c]; }
  double& operator()(int r, int c) { return m[3 * r + c]; }

  Vec3 row(int r) const { return {m[3 * r], m[3 * r + 1], m[3 * r + 2]}; }
  Vec3 col(int c) const { return {m[c], m[3 + c], m[6 + c]}; }

  Vec3 operator*(const Vec3& v) const {
    return {row(0).dot(v), row(1).dot(v), row(2).dot(v)};
  }
  Mat3 operator*(const Mat3& o) const;
  Mat3 operator*(double s) const;
  Mat3 operator+(const Mat3& o) const;
  Mat3 operator-(const Mat3& o) const;

  Mat3 transposed() const {
    return Mat3{{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
  }
  double det() const;
  Mat3 inverse() const;  // by adjugate; intended for well-conditioned inputs

  // Transpose-multiply, i.e. the inverse action for rotation matrices.
  Vec3 transposed_times(const Vec3& v) const {
    return {col(0).dot(v), col(1).dot(v), col(2).dot(v)};
  }
};

// Unit quaternion, scalar-first. Every operation that returns a UnitQuat
// renormalizes, keeping |norm - 1| < 1e-9 under arbitrarily long chains.
struct UnitQuat {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static UnitQuat identity() { return {}; }
  // axis must be unit length within 1e-9; throws std::invalid_argument.
  static UnitQuat from_axis_angle(const Vec3& axis, double angle);

  Vec3 vec() const { return {x, y, z}; }
  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
  UnitQuat normalized() const {
    const double n = norm();
    return {w / n, x / n, y / n, z / n};
  }
  UnitQuat negated() const { return {-w, -x, -y, -z}; }
};

// Hamilton product a ⊗ b, renormalized.
UnitQuat quat_multiply(const UnitQuat& a, const UnitQuat& b);

// Conjugate (w, -v); the inverse rotation for unit quaternions.
UnitQuat quat_conjugate(const UnitQuat& q);

// Rotation matrix mapping body-frame vectors to the inertial frame.
Mat3 quat_to_rotation(const UnitQuat& q);

// Rotate a single vector by q (body -> inertial).
Vec3 rotate(const UnitQuat& q, const Vec3& v);

// Inverse rotation (inertial -> body).
Vec3 rotate_inverse(const UnitQuat& q, const Vec3& v);

// Advance q by the body-frame angular rate over dt using the exact
// exponential map of omega*dt, then renormalize. Exact for constant rates.
UnitQuat quat_integrate(const UnitQuat& q, const Vec3& omega_body, double dt);

// Rodrigues rotation about a unit axis. Throws std::invalid_argument if the
// axis is not unit length within 1e-9.
Mat3 rotation_about_axis(const Vec3& axis, double angle);

// Relative rotation from a to b expressed as an axis-angle pair in the frame
// of a (angle in [0, pi]). Axis is zero when the rotation is negligible.
struct AxisAngle {
  Vec3 axis;
  double angle = 0.0;
};
AxisAngle relative_axis_angle(const UnitQuat& from, const UnitQuat& to);

// Geodesic distance between two attitudes, in radians, in [0, pi].
double attitude_angle(const UnitQuat& a, const UnitQuat& b);

}  // namespace omnisim
