#include "omnisim/control.hpp"

namespace omnisim {

Vec3 position_control(const Setpoint& sp, const StateEstimate& st,
                      PositionIntegrator& integrator,
                      const ControllerGains& gains,
                      const VehicleParams& params, double dt) {
  const Vec3 pos_err = sp.position - st.position;
  const Vec3 vel_err = sp.velocity - st.velocity;
  integrator.update(pos_err, dt);

  // Gravity compensation: the inertial force opposing weight (z up).
  const Vec3 gravity_comp{0.0, 0.0, params.mass * params.gravity};
  const Vec3 demand_inertial = pos_err * gains.kp_pos + vel_err * gains.kd_pos +
                               integrator.accumulated * gains.ki_pos +
                               gravity_comp + sp.acceleration * params.mass;
  return rotate_inverse(st.attitude, demand_inertial);
}

Vec3 attitude_control(const UnitQuat& q_des, const UnitQuat& q_est,
                      double kq) {
  // Error composed on the body side so the vector part is a body-frame
  // axis, which is what the rate loop consumes. The scalar part equals that
  // of q_des ⊗ q̂*, so the anti-unwinding sign is unaffected.
  const UnitQuat q_err = quat_multiply(quat_conjugate(q_est), q_des);
  const double sign = q_err.w >= 0.0 ? 1.0 : -1.0;
  return q_err.vec() * (kq * sign);
}

Vec3 rate_control(const Vec3& rate_des, const Vec3& rate_est,
                  const Vec3& force_des_body, const VehicleParams& params,
                  double kr) {
  return (rate_des - rate_est) * kr - params.com_offset.cross(force_des_body) +
         rate_est.cross(params.inertia * rate_est);
}

Wrench controller_step(const Setpoint& sp, const StateEstimate& st,
                       PositionIntegrator& integrator,
                       const ControllerGains& gains,
                       const VehicleParams& params, double dt) {
  const Vec3 force = position_control(sp, st, integrator, gains, params, dt);
  const Vec3 rate_des = attitude_control(sp.attitude, st.attitude, gains.kq);
  const Vec3 moment =
      rate_control(rate_des, st.body_rates, force, params, gains.kr);
  return {force, moment};
}

UnitQuat attitude_from_level(const Vec3& axis_unit, double angle) {
  return quat_multiply(level_attitude(),
                       UnitQuat::from_axis_angle(axis_unit, angle));
}

}  // namespace omnisim
