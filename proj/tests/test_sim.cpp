#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "omnisim/sim.hpp"

using namespace omnisim;

namespace {

const VehicleParams params = default_params();
const RotorGeometry geometry = rotor_geometry(params);

VehicleParams weightless() {
  VehicleParams p = params;
  p.gravity = 0.0;
  return p;
}

Setpoint hover_setpoint(double z = 1.0) {
  Setpoint sp;
  sp.position = {0, 0, z};
  sp.attitude = level_attitude();
  return sp;
}

double rotational_energy(const RigidBodyState& s, const VehicleParams& p) {
  return 0.5 * s.body_rates.dot(p.inertia * s.body_rates);
}

Vec3 inertial_angular_momentum(const RigidBodyState& s,
                               const VehicleParams& p) {
  return rotate(s.attitude, p.inertia * s.body_rates);
}

}  // namespace

TEST_CASE("derivative: coasting, free fall, principal-axis spin") {
  const VehicleParams p0 = weightless();

  RigidBodyState coasting;
  coasting.velocity = {1.0, 0.5, -0.2};
  const BodyDerivative d1 = derivative(coasting, Wrench{}, p0);
  CHECK((d1.position_dot - coasting.velocity).norm() < 1e-15);
  CHECK(d1.velocity_dot.norm() < 1e-15);
  CHECK(d1.body_rates_dot.norm() < 1e-15);

  RigidBodyState resting;
  const BodyDerivative d2 = derivative(resting, Wrench{}, params);
  // Weight pulls along inertial -z; identity attitude puts that on body -z.
  CHECK(d2.velocity_dot.z == doctest::Approx(-params.gravity).epsilon(1e-15));

  RigidBodyState spinning;
  spinning.body_rates = {0.0, 0.0, 3.0};
  const BodyDerivative d3 = derivative(spinning, Wrench{}, p0);
  CHECK(d3.body_rates_dot.norm() < 1e-15);
}

TEST_CASE("free fall drops g/2 in one second") {
  RigidBodyState body;
  body.attitude = level_attitude();
  for (int i = 0; i < 1000; ++i) {
    body = integrate(
        body, [](const RigidBodyState&) { return Wrench{}; }, 1e-3, params);
  }
  CHECK(std::abs(body.position.z - (-params.gravity / 2.0)) < 1e-9);
  CHECK(std::abs(body.position.x) < 1e-12);
}

TEST_CASE("torque-free tumble conserves energy and angular momentum") {
  VehicleParams p = weightless();
  p.inertia = Mat3::diagonal(0.03, 0.04, 0.05);  // asymmetric

  RigidBodyState body;
  body.body_rates = {1.2, -0.8, 2.0};  // excites all axes
  const double e0 = rotational_energy(body, p);
  const Vec3 l0 = inertial_angular_momentum(body, p);

  const auto no_wrench = [](const RigidBodyState&) { return Wrench{}; };
  for (int i = 0; i < 10000; ++i) {
    body = integrate(body, no_wrench, 1e-3, p);
  }
  CHECK(std::abs(rotational_energy(body, p) - e0) < 1e-8 * e0);
  CHECK((inertial_angular_momentum(body, p) - l0).norm() < 1e-8 * l0.norm());
  CHECK(std::abs(body.attitude.norm() - 1.0) < 1e-9);
}

TEST_CASE("fourth-order convergence on a smooth wrench field") {
  // Smooth state-dependent wrench keeps the full system inside classical
  // RK4 assumptions; halving the step must shrink the endpoint error by
  // roughly sixteen.
  VehicleParams p = weightless();
  const auto wrench_field = [&](const RigidBodyState& s) {
    Wrench w;
    w.force = {0.8 * std::sin(s.position.x) - 0.3 * s.velocity.y, 0.4,
               0.2 * s.position.z};
    w.moment = {0.01 * s.body_rates.y, -0.008 * s.body_rates.z,
                0.005 * std::sin(s.position.y)};
    return w;
  };
  const auto endpoint = [&](double dt) {
    RigidBodyState body;
    body.velocity = {0.3, 0.0, -0.1};
    body.body_rates = {0.4, -0.2, 0.6};
    const long steps = std::lround(10.0 / dt);
    for (long i = 0; i < steps; ++i) body = integrate(body, wrench_field, dt, p);
    return body;
  };

  const RigidBodyState ref = endpoint(1.0 / 4096.0);
  const RigidBodyState coarse = endpoint(1.0 / 128.0);
  const RigidBodyState half = endpoint(1.0 / 256.0);
  const double err_coarse = (coarse.position - ref.position).norm();
  const double err_half = (half.position - ref.position).norm();
  CHECK(err_half < err_coarse / 8.0);
}

TEST_CASE("hover setpoint from hover state stays put") {
  const ControllerGains gains;
  const Setpoint sp = hover_setpoint();
  SimState sim = make_sim_state(params, gains, sp);
  for (int i = 0; i < 50; ++i) {
    const RigidBodyState before = sim.body;
    simulate_step(sim, sp, gains, params, 4e-3, 1e-3);
    CHECK((sim.body.position - before.position).norm() < 1e-6);
    CHECK(attitude_angle(sim.body.attitude, before.attitude) < 1e-6);
  }
  CHECK((sim.body.position - sp.position).norm() < 1e-6);
}

TEST_CASE("step setpoint accelerates the right way") {
  const ControllerGains gains;
  SimState sim = make_sim_state(params, gains, hover_setpoint());
  Setpoint target = hover_setpoint();
  target.position = {1.0, 0.0, 1.0};
  for (int i = 0; i < 100; ++i) {
    simulate_step(sim, target, gains, params, 4e-3, 1e-3);
  }
  CHECK(sim.body.position.x > 0.01);
  // Converges toward the step over a few seconds.
  for (int i = 0; i < 1500; ++i) {
    simulate_step(sim, target, gains, params, 4e-3, 1e-3);
  }
  CHECK(std::abs(sim.body.position.x - 1.0) < 0.05);
}

TEST_CASE("upside-down hover is an equilibrium too") {
  const ControllerGains gains;
  Setpoint sp = hover_setpoint(2.0);
  sp.attitude = attitude_from_level({0, 1, 0}, kPi);
  SimState sim = make_sim_state(params, gains, sp);

  // Trim put the tilts at a half turn; verify and hold for two seconds.
  for (double tilt : sim.actuators.tilt) {
    CHECK(std::abs(std::abs(tilt) - kPi) < 1e-6);
  }
  for (int i = 0; i < 500; ++i) {
    simulate_step(sim, sp, gains, params, 4e-3, 1e-3);
  }
  CHECK((sim.body.position - sp.position).norm() < 2e-4);  // < 1e-4 m/s drift
  CHECK(attitude_angle(sim.body.attitude, sp.attitude) < 1e-4);
}

TEST_CASE("with actuators bypassed the realized wrench equals the command") {
  const ControllerGains gains;
  SimState sim = make_sim_state(params, gains, hover_setpoint());
  Setpoint target = hover_setpoint();
  target.position = {0.4, -0.3, 1.2};
  target.attitude = attitude_from_level({1, 0, 0}, 0.3);

  StepOptions options;
  options.bypass_actuators = true;
  for (int i = 0; i < 200; ++i) {
    const LogRecord rec =
        simulate_step(sim, target, gains, params, 4e-3, 1e-3, options);
    for (bool s : rec.saturated) REQUIRE(!s);
    CHECK((rec.realized - rec.commanded).force.norm() < 1e-9);
    CHECK((rec.realized - rec.commanded).moment.norm() < 1e-9);
  }
}

TEST_CASE("quaternion norm stays unit through a long run") {
  const ControllerGains gains;
  SimState sim = make_sim_state(params, gains, hover_setpoint());
  Setpoint wander = hover_setpoint();
  wander.position = {2.0, -1.0, 3.0};
  wander.attitude = attitude_from_level({0, 1, 0}, 0.8);
  for (int i = 0; i < 15000; ++i) {  // 60 s at dt_ctrl = 4 ms
    simulate_step(sim, wander, gains, params, 4e-3, 1e-3);
    if (i % 100 == 0) CHECK(std::abs(sim.body.attitude.norm() - 1.0) < 1e-9);
  }
  CHECK(std::abs(sim.body.attitude.norm() - 1.0) < 1e-9);
}

TEST_CASE("control step must be a multiple of the physics step") {
  const ControllerGains gains;
  SimState sim = make_sim_state(params, gains, hover_setpoint());
  CHECK_THROWS_AS(
      simulate_step(sim, hover_setpoint(), gains, params, 3e-3, 2e-3),
      std::invalid_argument);
}
