#include "omnisim/sim.hpp"

#include <cmath>

namespace omnisim {

namespace {

RigidBodyState advanced(const RigidBodyState& s, const BodyDerivative& d,
                        double h) {
  RigidBodyState out;
  out.position = s.position + d.position_dot * h;
  out.velocity = s.velocity + d.velocity_dot * h;
  out.attitude = UnitQuat{s.attitude.w + d.attitude_dot[0] * h,
                          s.attitude.x + d.attitude_dot[1] * h,
                          s.attitude.y + d.attitude_dot[2] * h,
                          s.attitude.z + d.attitude_dot[3] * h}
                     .normalized();
  out.body_rates = s.body_rates + d.body_rates_dot * h;
  return out;
}

}  // namespace

BodyDerivative derivative(const RigidBodyState& body, const Wrench& wrench,
                          const VehicleParams& params) {
  const Mat3 R = quat_to_rotation(body.attitude);
  const Vec3 weight_inertial{0.0, 0.0, -params.mass * params.gravity};
  const Vec3 force_body = wrench.force + R.transposed_times(weight_inertial);

  BodyDerivative d;
  d.position_dot = R * body.velocity;
  d.velocity_dot =
      force_body / params.mass - body.body_rates.cross(body.velocity);
  const Vec3 momentum = params.inertia * body.body_rates;
  d.body_rates_dot = params.inertia.inverse() *
                     (wrench.moment - body.body_rates.cross(momentum));
  // q_dot = q/2 ⊗ (0, omega)
  const UnitQuat& q = body.attitude;
  const Vec3& w = body.body_rates;
  d.attitude_dot[0] = 0.5 * (-q.x * w.x - q.y * w.y - q.z * w.z);
  d.attitude_dot[1] = 0.5 * (q.w * w.x + q.y * w.z - q.z * w.y);
  d.attitude_dot[2] = 0.5 * (q.w * w.y - q.x * w.z + q.z * w.x);
  d.attitude_dot[3] = 0.5 * (q.w * w.z + q.x * w.y - q.y * w.x);
  return d;
}

RigidBodyState integrate(const RigidBodyState& body, const WrenchFn& wrench_fn,
                         double dt, const VehicleParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be > 0");
  const BodyDerivative k1 = derivative(body, wrench_fn(body), params);
  const RigidBodyState s2 = advanced(body, k1, 0.5 * dt);
  const BodyDerivative k2 = derivative(s2, wrench_fn(s2), params);
  const RigidBodyState s3 = advanced(body, k2, 0.5 * dt);
  const BodyDerivative k3 = derivative(s3, wrench_fn(s3), params);
  const RigidBodyState s4 = advanced(body, k3, dt);
  const BodyDerivative k4 = derivative(s4, wrench_fn(s4), params);

  BodyDerivative sum = k1;
  for (int i = 0; i < 4; ++i) {
    sum.attitude_dot[i] = (k1.attitude_dot[i] + 2.0 * k2.attitude_dot[i] +
                           2.0 * k3.attitude_dot[i] + k4.attitude_dot[i]) /
                          6.0;
  }
  sum.position_dot = (k1.position_dot + 2.0 * k2.position_dot +
                      2.0 * k3.position_dot + k4.position_dot) /
                     6.0;
  sum.velocity_dot = (k1.velocity_dot + 2.0 * k2.velocity_dot +
                      2.0 * k3.velocity_dot + k4.velocity_dot) /
                     6.0;
  sum.body_rates_dot = (k1.body_rates_dot + 2.0 * k2.body_rates_dot +
                        2.0 * k3.body_rates_dot + k4.body_rates_dot) /
                       6.0;
  return advanced(body, sum, dt);
}

StateEstimate estimate_from(const RigidBodyState& body) {
  StateEstimate est;
  est.position = body.position;
  est.velocity = rotate(body.attitude, body.velocity);
  est.attitude = body.attitude;
  est.body_rates = body.body_rates;
  return est;
}

SimState make_sim_state(const VehicleParams& params,
                        const ControllerGains& gains, const Setpoint& initial,
                        double eps_axis) {
  const RotorGeometry geometry = rotor_geometry(params);
  SimState sim{.body = {},
               .actuators = {},
               .integrator = {.accumulated = {}, .clamp = gains.integrator_clamp},
               .allocator = Allocator(params, geometry),
               .geometry = geometry,
               .mask = RotorMask::full(),
               .saturated = {},
               .eps_axis = eps_axis,
               .time = 0.0};
  sim.body.position = initial.position;
  sim.body.attitude = initial.attitude;
  sim.mask = select_mask(initial.attitude, geometry, eps_axis);

  // Trim the actuators to the equilibrium command for the initial pose.
  PositionIntegrator scratch{.accumulated = {}, .clamp = gains.integrator_clamp};
  const Wrench trim = controller_step(initial, estimate_from(sim.body), scratch,
                                      gains, params, 1e-3);
  const AllocationResult res = sim.allocator.allocate(trim, sim.mask);
  sim.actuators.speed = res.command.speed;
  sim.actuators.tilt = res.command.tilt;
  return sim;
}

LogRecord simulate_step(SimState& sim, const Setpoint& sp,
                        const ControllerGains& gains,
                        const VehicleParams& params, double dt_ctrl,
                        double dt_phys, const StepOptions& options) {
  const double ratio = dt_ctrl / dt_phys;
  const int substeps = static_cast<int>(std::lround(ratio));
  if (substeps < 1 || std::abs(ratio - substeps) > 1e-9) {
    throw std::invalid_argument(
        "simulate_step: dt_ctrl must be an integer multiple of dt_phys");
  }

  sim.integrator.frozen = false;
  for (bool s : sim.saturated) sim.integrator.frozen = sim.integrator.frozen || s;

  const Wrench commanded = controller_step(sp, estimate_from(sim.body),
                                           sim.integrator, gains, params,
                                           dt_ctrl);
  sim.mask = select_mask(sp.attitude, sim.geometry, sim.eps_axis);
  const AllocationResult alloc = sim.allocator.allocate(commanded, sim.mask);
  sim.saturated = alloc.command.saturated;

  if (options.bypass_actuators) {
    sim.actuators.speed = alloc.command.speed;
    sim.actuators.tilt = alloc.command.tilt;
  }

  for (int k = 0; k < substeps; ++k) {
    Wrench acting = body_wrench(sim.actuators, params, sim.geometry);
    if (options.disturbance) acting = acting + options.disturbance();
    sim.body = integrate(
        sim.body, [&acting](const RigidBodyState&) { return acting; }, dt_phys,
        params);
    if (!options.bypass_actuators) {
      if (step_actuators(sim.actuators, alloc.command, params, dt_phys)) {
        throw ActuatorWindingError("tilt reached the 720 degree winding limit");
      }
    }
  }
  sim.time += dt_ctrl;

  LogRecord rec;
  rec.t = sim.time;
  rec.position = sim.body.position;
  rec.attitude = sim.body.attitude;
  rec.body_rates = sim.body.body_rates;
  rec.tilt = sim.actuators.tilt;
  rec.speed = sim.actuators.speed;
  rec.commanded = commanded;
  rec.realized = body_wrench(sim.actuators, params, sim.geometry);
  rec.mask_size = sim.mask.active_count();
  rec.saturated = sim.saturated;
  return rec;
}

}  // namespace omnisim
