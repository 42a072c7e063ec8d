#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "omnisim/spatial.hpp"

using namespace omnisim;

namespace {

UnitQuat random_unit_quat(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return UnitQuat{n(rng), n(rng), n(rng), n(rng)}.normalized();
}

Vec3 random_vec(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

double max_abs_diff(const Mat3& a, const Mat3& b) {
  double m = 0.0;
  for (int i = 0; i < 9; ++i) m = std::max(m, std::abs(a.m[i] - b.m[i]));
  return m;
}

}  // namespace

TEST_CASE("quat_multiply identity and inverse") {
  std::mt19937_64 rng(11);
  const UnitQuat q = random_unit_quat(rng);

  const UnitQuat iq = quat_multiply(UnitQuat::identity(), q);
  CHECK(iq.w == doctest::Approx(q.w).epsilon(1e-15));
  CHECK(iq.x == doctest::Approx(q.x).epsilon(1e-15));

  const UnitQuat self = quat_multiply(q, quat_conjugate(q));
  CHECK(std::abs(self.w) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(self.vec().norm() < 1e-12);
}

TEST_CASE("quat_conjugate flips the vector part") {
  const UnitQuat q{0.5, 0.5, 0.5, 0.5};
  const UnitQuat c = quat_conjugate(q);
  CHECK(c.w == 0.5);
  CHECK(c.x == -0.5);
  CHECK(c.y == -0.5);
  CHECK(c.z == -0.5);

  const UnitQuat i = quat_conjugate(UnitQuat::identity());
  CHECK(i.w == 1.0);
  CHECK(i.vec().norm() == 0.0);
}

TEST_CASE("product matches rotation-matrix composition") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const UnitQuat a = random_unit_quat(rng);
    const UnitQuat b = random_unit_quat(rng);
    const Mat3 lhs = quat_to_rotation(quat_multiply(a, b));
    const Mat3 rhs = quat_to_rotation(a) * quat_to_rotation(b);
    CHECK(max_abs_diff(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("every returned quaternion stays unit") {
  std::mt19937_64 rng(3);
  UnitQuat q = random_unit_quat(rng);
  for (int i = 0; i < 10000; ++i) {
    q = quat_multiply(q, random_unit_quat(rng));
    CHECK(std::abs(q.norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("quat_to_rotation basics") {
  const Mat3 eye = quat_to_rotation(UnitQuat::identity());
  CHECK(max_abs_diff(eye, Mat3::identity()) == 0.0);

  // 90 degrees about z maps x to y and y to -x.
  const UnitQuat qz = UnitQuat::from_axis_angle({0, 0, 1}, kPi / 2.0);
  const Mat3 r = quat_to_rotation(qz);
  CHECK((r * Vec3{1, 0, 0} - Vec3{0, 1, 0}).norm() < 1e-15);
  CHECK((r * Vec3{0, 1, 0} - Vec3{-1, 0, 0}).norm() < 1e-15);
  CHECK((r * Vec3{0, 0, 1} - Vec3{0, 0, 1}).norm() < 1e-15);
}

TEST_CASE("rotation matrices are orthonormal with unit determinant") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat3 r = quat_to_rotation(random_unit_quat(rng));
    CHECK(max_abs_diff(r * r.transposed(), Mat3::identity()) < 1e-12);
    CHECK(r.det() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("rotate agrees with the matrix form") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const UnitQuat q = random_unit_quat(rng);
    const Vec3 v = random_vec(rng, 10.0);
    CHECK((rotate(q, v) - quat_to_rotation(q) * v).norm() < 1e-12);
    CHECK((rotate_inverse(q, rotate(q, v)) - v).norm() < 1e-12);
  }
}

TEST_CASE("quat_integrate zero rate and full turn") {
  std::mt19937_64 rng(7);
  const UnitQuat q = random_unit_quat(rng);

  const UnitQuat same = quat_integrate(q, {0, 0, 0}, 0.1);
  CHECK(attitude_angle(q, same) < 1e-12);

  const UnitQuat turned = quat_integrate(q, {0, 0, 2.0 * kPi}, 1.0);
  CHECK(attitude_angle(q, turned) < 1e-9);  // same rotation, opposite sign
  CHECK(turned.w == doctest::Approx(-q.w).epsilon(1e-9));
}

TEST_CASE("quat_integrate matches the closed form over many steps") {
  UnitQuat q = UnitQuat::identity();
  for (int i = 0; i < 1000; ++i) q = quat_integrate(q, {0.1, 0, 0}, 0.01);
  const UnitQuat expected = UnitQuat::from_axis_angle({1, 0, 0}, 1.0);
  CHECK(attitude_angle(q, expected) < 1e-6);
}

TEST_CASE("quat_integrate first-order convergence for varying rates") {
  // Piecewise-constant sampling of a time-varying rate: halving the step
  // should roughly halve the endpoint error.
  auto integrate_with_step = [](double dt) {
    UnitQuat q = UnitQuat::identity();
    const int steps = static_cast<int>(std::lround(2.0 / dt));
    for (int i = 0; i < steps; ++i) {
      const double t = i * dt;
      q = quat_integrate(q, {std::sin(t), std::cos(t), 0.3}, dt);
    }
    return q;
  };
  const UnitQuat fine = integrate_with_step(1.0 / 8192.0);
  const double err_coarse = attitude_angle(integrate_with_step(1.0 / 64.0), fine);
  const double err_half = attitude_angle(integrate_with_step(1.0 / 128.0), fine);
  CHECK(err_half < 0.65 * err_coarse);
}

TEST_CASE("rotation_about_axis fixes the tilt sign convention") {
  CHECK(max_abs_diff(rotation_about_axis({1, 0, 0}, 0.0), Mat3::identity()) <
        1e-15);

  const Mat3 half_turn = rotation_about_axis({1, 0, 0}, kPi);
  CHECK(max_abs_diff(half_turn, Mat3::diagonal(1, -1, -1)) < 1e-15);

  // Positive angle about x takes e_z to (0, -sin a, cos a); this sign choice
  // is relied on by the whole tilt model.
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> angle_dist(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = angle_dist(rng);
    const Vec3 mapped = rotation_about_axis({1, 0, 0}, a) * Vec3{0, 0, 1};
    CHECK(mapped.x == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(mapped.y == doctest::Approx(-std::sin(a)).epsilon(1e-14));
    CHECK(mapped.z == doctest::Approx(std::cos(a)).epsilon(1e-14));
  }

  CHECK_THROWS_AS(rotation_about_axis({1, 1, 0}, 0.3), std::invalid_argument);
}

TEST_CASE("relative_axis_angle recovers axis-angle pairs") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> angle_dist(0.01, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const UnitQuat base = random_unit_quat(rng);
    const Vec3 axis = random_vec(rng).normalized();
    const double angle = angle_dist(rng);
    const UnitQuat target =
        quat_multiply(base, UnitQuat::from_axis_angle(axis, angle));
    const AxisAngle rel = relative_axis_angle(base, target);
    CHECK(rel.angle == doctest::Approx(angle).epsilon(1e-10));
    CHECK((rel.axis - axis).norm() < 1e-9);
  }
}

TEST_CASE("Mat3 inverse") {
  const Mat3 j = Mat3::diagonal(0.03, 0.04, 0.05);
  const Mat3 ji = j.inverse();
  CHECK(max_abs_diff(j * ji, Mat3::identity()) < 1e-14);
  CHECK_THROWS_AS(Mat3::diagonal(1, 1, 0).inverse(), std::domain_error);
}
