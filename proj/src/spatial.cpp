#include "omnisim/spatial.hpp"

#include <stdexcept>

namespace omnisim {

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j) +
                (*this)(i, 2) * o(2, j);
    }
  }
  return r;
}

Mat3 Mat3::operator*(double s) const {
  Mat3 r = *this;
  for (double& v : r.m) v *= s;
  return r;
}

Mat3 Mat3::operator+(const Mat3& o) const {
  Mat3 r = *this;
  for (int i = 0; i < 9; ++i) r.m[i] += o.m[i];
  return r;
}

Mat3 Mat3::operator-(const Mat3& o) const {
  Mat3 r = *this;
  for (int i = 0; i < 9; ++i) r.m[i] -= o.m[i];
  return r;
}

double Mat3::det() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) -
         m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Mat3 Mat3::inverse() const {
  const double d = det();
  if (std::abs(d) < 1e-300) {
    throw std::domain_error("Mat3::inverse: singular matrix");
  }
  Mat3 adj;
  adj(0, 0) = m[4] * m[8] - m[5] * m[7];
  adj(0, 1) = m[2] * m[7] - m[1] * m[8];
  adj(0, 2) = m[1] * m[5] - m[2] * m[4];
  adj(1, 0) = m[5] * m[6] - m[3] * m[8];
  adj(1, 1) = m[0] * m[8] - m[2] * m[6];
  adj(1, 2) = m[2] * m[3] - m[0] * m[5];
  adj(2, 0) = m[3] * m[7] - m[4] * m[6];
  adj(2, 1) = m[1] * m[6] - m[0] * m[7];
  adj(2, 2) = m[0] * m[4] - m[1] * m[3];
  return adj * (1.0 / d);
}

UnitQuat UnitQuat::from_axis_angle(const Vec3& axis, double angle) {
  if (std::abs(axis.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("quaternion axis must be unit length");
  }
  const double half = 0.5 * angle;
  const double s = std::sin(half);
  return UnitQuat{std::cos(half), s * axis.x, s * axis.y, s * axis.z}
      .normalized();
}

UnitQuat quat_multiply(const UnitQuat& a, const UnitQuat& b) {
  UnitQuat r;
  r.w = a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z;
  r.x = a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y;
  r.y = a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x;
  r.z = a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w;
  return r.normalized();
}

UnitQuat quat_conjugate(const UnitQuat& q) { return {q.w, -q.x, -q.y, -q.z}; }

Mat3 quat_to_rotation(const UnitQuat& q) {
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  Mat3 r;
  r(0, 0) = 1.0 - 2.0 * (y * y + z * z);
  r(0, 1) = 2.0 * (x * y - w * z);
  r(0, 2) = 2.0 * (x * z + w * y);
  r(1, 0) = 2.0 * (x * y + w * z);
  r(1, 1) = 1.0 - 2.0 * (x * x + z * z);
  r(1, 2) = 2.0 * (y * z - w * x);
  r(2, 0) = 2.0 * (x * z - w * y);
  r(2, 1) = 2.0 * (y * z + w * x);
  r(2, 2) = 1.0 - 2.0 * (x * x + y * y);
  return r;
}

Vec3 rotate(const UnitQuat& q, const Vec3& v) {
  const Vec3 u = q.vec();
  const Vec3 t = u.cross(v) * 2.0;
  return v + t * q.w + u.cross(t);
}

Vec3 rotate_inverse(const UnitQuat& q, const Vec3& v) {
  return rotate(quat_conjugate(q), v);
}

UnitQuat quat_integrate(const UnitQuat& q, const Vec3& omega_body, double dt) {
  const Vec3 theta = omega_body * dt;
  const double angle = theta.norm();
  UnitQuat dq;
  if (angle < 1e-12) {
    dq = UnitQuat{1.0, 0.5 * theta.x, 0.5 * theta.y, 0.5 * theta.z}
             .normalized();
  } else {
    const double s = std::sin(0.5 * angle) / angle;
    dq = UnitQuat{std::cos(0.5 * angle), s * theta.x, s * theta.y, s * theta.z};
  }
  // Body-frame rate composes on the right.
  return quat_multiply(q, dq);
}

Mat3 rotation_about_axis(const Vec3& axis, double angle) {
  if (std::abs(axis.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("rotation axis must be unit length");
  }
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  const double ax = axis.x, ay = axis.y, az = axis.z;
  Mat3 r;
  r(0, 0) = c + ax * ax * t;
  r(0, 1) = ax * ay * t - az * s;
  r(0, 2) = ax * az * t + ay * s;
  r(1, 0) = ax * ay * t + az * s;
  r(1, 1) = c + ay * ay * t;
  r(1, 2) = ay * az * t - ax * s;
  r(2, 0) = ax * az * t - ay * s;
  r(2, 1) = ay * az * t + ax * s;
  r(2, 2) = c + az * az * t;
  return r;
}

AxisAngle relative_axis_angle(const UnitQuat& from, const UnitQuat& to) {
  UnitQuat d = quat_multiply(quat_conjugate(from), to);
  if (d.w < 0.0) d = d.negated();  // shorter arc
  const double vnorm = d.vec().norm();
  AxisAngle out;
  out.angle = 2.0 * std::atan2(vnorm, d.w);
  if (vnorm > 1e-15) out.axis = d.vec() / vnorm;
  return out;
}

double attitude_angle(const UnitQuat& a, const UnitQuat& b) {
  return relative_axis_angle(a, b).angle;
}

}  // namespace omnisim
