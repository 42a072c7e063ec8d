#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "omnisim/rotor_wrench.hpp"

using namespace omnisim;

namespace {

const VehicleParams params = default_params();
const RotorGeometry geometry = rotor_geometry(params);

std::array<double, kNumRotors> random_tilts(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-kPi, kPi);
  std::array<double, kNumRotors> a;
  for (double& v : a) v = d(rng);
  return a;
}

std::array<double, kNumRotors> random_speeds(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.0, 900.0);
  std::array<double, kNumRotors> n;
  for (double& v : n) v = d(rng);
  return n;
}

}  // namespace

TEST_CASE("square-law thrust and drag torque") {
  CHECK(rotor_thrust(0.0, params.lift_coeff) == 0.0);
  CHECK(rotor_thrust(params.rotor_speed_max, params.lift_coeff) ==
        doctest::Approx(13.7).epsilon(1e-12));
  CHECK(rotor_thrust(400.0, params.lift_coeff) ==
        doctest::Approx(4.0 * rotor_thrust(200.0, params.lift_coeff)));

  CHECK(rotor_drag_torque(0.0, params.drag_torque_coeff) == 0.0);
  CHECK(rotor_drag_torque(600.0, params.drag_torque_coeff) ==
        doctest::Approx(4.0 * rotor_drag_torque(300.0,
                                                params.drag_torque_coeff)));
  // Thrust/drag ratio is speed independent.
  CHECK(rotor_drag_torque(500.0, params.drag_torque_coeff) /
            rotor_thrust(500.0, params.lift_coeff) ==
        doctest::Approx(params.drag_torque_coeff / params.lift_coeff)
            .epsilon(1e-12));

  CHECK_THROWS_AS(rotor_thrust(-1.0, params.lift_coeff),
                  std::invalid_argument);
  CHECK_THROWS_AS(rotor_drag_torque(-1.0, params.drag_torque_coeff),
                  std::invalid_argument);
}

TEST_CASE("rotor frame orientation at notable tilts") {
  for (int i = 0; i < kNumRotors; ++i) {
    const Vec3 z0 = rotor_frame_rotation(geometry, i, 0.0).col(2);
    CHECK((z0 - Vec3{0, 0, 1}).norm() < 1e-14);

    const Vec3 z90 = rotor_frame_rotation(geometry, i, kPi / 2.0).col(2);
    CHECK(std::abs(z90.z) < 1e-14);
    CHECK(std::abs(z90.dot(geometry.rotor[i].tilt_axis)) < 1e-14);

    const Vec3 z180 = rotor_frame_rotation(geometry, i, kPi).col(2);
    CHECK((z180 - Vec3{0, 0, -1}).norm() < 1e-14);
  }
}

TEST_CASE("hover configuration cancels moments") {
  ActuatorState state;
  state.speed.fill(650.0);
  const Wrench w = body_wrench(state, params, geometry);
  const double thrust = 6.0 * params.lift_coeff * 650.0 * 650.0;
  CHECK(w.force.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(w.force.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(w.force.z == doctest::Approx(-thrust).epsilon(1e-12));
  CHECK(w.moment.norm() < 1e-12);
}

TEST_CASE("all rotors stopped produce no wrench") {
  const Wrench w = body_wrench(ActuatorState{}, params, geometry);
  CHECK(w.force.norm() == 0.0);
  CHECK(w.moment.norm() == 0.0);
}

TEST_CASE("single tilted rotor matches the closed form") {
  // Independent derivation: with arm direction u, tangent t = e_z x u, the
  // rotor's thrust is -T cos(a) e_z + T sin(a) t, the drag torque is the
  // spin-signed kappa/mu multiple of it, and the thrust moment is
  // r x F = T cos(a) l t + T sin(a) l e_z.
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> tilt_dist(-kPi, kPi);
  std::uniform_real_distribution<double> speed_dist(100.0, 900.0);
  for (int i = 0; i < kNumRotors; ++i) {
    const double a = tilt_dist(rng);
    const double n = speed_dist(rng);
    ActuatorState state;
    state.speed[i] = n;
    state.tilt[i] = a;
    const Wrench w = body_wrench(state, params, geometry);

    const double thrust = params.lift_coeff * n * n;
    const double drag = params.drag_torque_coeff * n * n;
    const double c = geometry.rotor[i].spin_sign;
    const double l = params.arm_length;
    const Vec3 t = geometry.tangent(i);
    const Vec3 ez{0, 0, 1};

    const Vec3 force = t * (thrust * std::sin(a)) - ez * (thrust * std::cos(a));
    const Vec3 drag_moment =
        (t * (drag * std::sin(a)) - ez * (drag * std::cos(a))) * c;
    const Vec3 thrust_moment =
        t * (thrust * std::cos(a) * l) + ez * (thrust * std::sin(a) * l);

    CHECK((w.force - force).norm() < 1e-12);
    CHECK((w.moment - (drag_moment + thrust_moment)).norm() < 1e-12);
    // Rotation preserves the thrust magnitude regardless of tilt.
    CHECK(w.force.norm() == doctest::Approx(thrust).epsilon(1e-12));
  }
}

TEST_CASE("allocation matrix columns reproduce the wrench sum") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    ActuatorState state;
    state.tilt = random_tilts(rng);
    state.speed = random_speeds(rng);

    const AllocationMatrix a = allocation_matrix(state.tilt, params, geometry);
    Eigen::Matrix<double, 6, 1> squared;
    for (int i = 0; i < kNumRotors; ++i) {
      squared(i) = state.speed[i] * state.speed[i];
    }
    const Eigen::Matrix<double, 6, 1> via_matrix = a * squared;
    const Eigen::Matrix<double, 6, 1> direct =
        to_vector(body_wrench(state, params, geometry));
    // Scale-aware: wrench entries reach tens of newtons.
    CHECK((via_matrix - direct).cwiseAbs().maxCoeff() <
          1e-12 * std::max(1.0, direct.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("hover column sum") {
  std::array<double, kNumRotors> zero_tilt{};
  const AllocationMatrix a = allocation_matrix(zero_tilt, params, geometry);
  const double n0 = 500.0;
  const Eigen::Matrix<double, 6, 1> w =
      a * Eigen::Matrix<double, 6, 1>::Constant(n0 * n0);
  CHECK(w(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(w(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(w(2) ==
        doctest::Approx(-6.0 * params.lift_coeff * n0 * n0).epsilon(1e-12));
  CHECK(w.tail<3>().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("allocation matrix rank: singular untilted, full rank generically") {
  std::array<double, kNumRotors> zero_tilt{};
  const AllocationMatrix at_zero =
      allocation_matrix(zero_tilt, params, geometry);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_zero(at_zero);
  svd_zero.setThreshold(1e-10);
  CHECK(svd_zero.rank() < 6);

  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    const AllocationMatrix a =
        allocation_matrix(random_tilts(rng), params, geometry);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    svd.setThreshold(1e-10);
    CHECK(svd.rank() == 6);
  }
}
