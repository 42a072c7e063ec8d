#pragma once

#include <algorithm>

#include "omnisim/rotor_wrench.hpp"
#include "omnisim/spatial.hpp"
#include "omnisim/vehicle.hpp"

// Cascaded flight control: position PID with gravity and acceleration
// feedforward producing a body-frame force demand, quaternion-error attitude
// control producing a body-rate demand, and a rate loop producing the moment
// demand with center-of-mass offset and gyroscopic compensation.

namespace omnisim {

struct ControllerGains {
  double kp_pos = 30.0;   // N/m
  double kd_pos = 14.0;   // N*s/m
  double ki_pos = 5.0;    // N/(m*s)
  double kq = 6.0;        // 1/s
  double kr = 1.0;        // N*m*s
  double integrator_clamp = 2.0;  // m*s, per axis
};

struct Setpoint {
  Vec3 position;          // m, inertial
  Vec3 velocity;          // m/s, inertial
  Vec3 acceleration;      // m/s^2, inertial
  UnitQuat attitude;      // body -> inertial
};

struct StateEstimate {
  Vec3 position;          // m, inertial
  Vec3 velocity;          // m/s, inertial
  UnitQuat attitude;      // body -> inertial
  Vec3 body_rates;        // rad/s, body
};

// Clamped position-error integral. Freezing (used while any rotor command is
// saturated) stops accumulation without clearing the stored value.
struct PositionIntegrator {
  Vec3 accumulated;   // m*s
  double clamp = 2.0;
  bool frozen = false;

  void update(const Vec3& position_error, double dt) {
    if (frozen) return;
    accumulated += position_error * dt;
    accumulated.x = std::clamp(accumulated.x, -clamp, clamp);
    accumulated.y = std::clamp(accumulated.y, -clamp, clamp);
    accumulated.z = std::clamp(accumulated.z, -clamp, clamp);
  }
};

// PID force demand in the body frame, including gravity compensation and the
// mass-scaled acceleration feedforward. Updates the integrator.
Vec3 position_control(const Setpoint& sp, const StateEstimate& st,
                      PositionIntegrator& integrator,
                      const ControllerGains& gains,
                      const VehicleParams& params, double dt);

// Body-rate demand from the quaternion error. The sign of the scalar error
// part avoids unwinding; sign(0) is taken as +1.
Vec3 attitude_control(const UnitQuat& q_des, const UnitQuat& q_est, double kq);

// Moment demand with CoM-offset and gyroscopic compensation.
Vec3 rate_control(const Vec3& rate_des, const Vec3& rate_est,
                  const Vec3& force_des_body, const VehicleParams& params,
                  double kr);

// Full cascade for one control tick.
Wrench controller_step(const Setpoint& sp, const StateEstimate& st,
                       PositionIntegrator& integrator,
                       const ControllerGains& gains,
                       const VehicleParams& params, double dt);

// The level-flight attitude: body z (down) anti-aligned with inertial z (up).
inline UnitQuat level_attitude() { return UnitQuat{0.0, 1.0, 0.0, 0.0}; }

// Attitude reached by rotating from level about a body axis.
UnitQuat attitude_from_level(const Vec3& axis_unit, double angle);

}  // namespace omnisim
