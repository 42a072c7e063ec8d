#include "omnisim/rotor_wrench.hpp"

#include <stdexcept>

namespace omnisim {

double rotor_thrust(double speed, double lift_coeff) {
  if (speed < 0.0) {
    throw std::invalid_argument("rotor_thrust: speed must be >= 0");
  }
  return lift_coeff * speed * speed;
}

double rotor_drag_torque(double speed, double drag_torque_coeff) {
  if (speed < 0.0) {
    throw std::invalid_argument("rotor_drag_torque: speed must be >= 0");
  }
  return drag_torque_coeff * speed * speed;
}

Mat3 rotor_frame_rotation(const RotorGeometry& geometry, int i, double tilt) {
  const Rotor& r = geometry.rotor[i];
  const Mat3 azimuth = rotation_about_axis({0.0, 0.0, 1.0}, r.azimuth);
  return rotation_about_axis(r.tilt_axis, tilt) * azimuth;
}

Wrench single_rotor_wrench(int i, double speed, double tilt,
                           const VehicleParams& params,
                           const RotorGeometry& geometry) {
  const Mat3 R = rotor_frame_rotation(geometry, i, tilt);
  const double thrust = rotor_thrust(speed, params.lift_coeff);
  const double drag = rotor_drag_torque(speed, params.drag_torque_coeff);
  // Thrust and drag torque act along the rotor -z axis (z points down).
  const Vec3 ez_rotor = R.col(2);
  const Vec3 force = ez_rotor * -thrust;
  const Vec3 torque = ez_rotor * (-geometry.rotor[i].spin_sign * drag);
  return {force, torque + geometry.rotor[i].position.cross(force)};
}

Wrench body_wrench(const ActuatorState& state, const VehicleParams& params,
                   const RotorGeometry& geometry) {
  Wrench total;
  for (int i = 0; i < kNumRotors; ++i) {
    total = total +
            single_rotor_wrench(i, state.speed[i], state.tilt[i], params,
                                geometry);
  }
  return total;
}

AllocationMatrix allocation_matrix(const std::array<double, kNumRotors>& tilt,
                                   const VehicleParams& params,
                                   const RotorGeometry& geometry) {
  AllocationMatrix a;
  for (int i = 0; i < kNumRotors; ++i) {
    a.col(i) = to_vector(single_rotor_wrench(i, 1.0, tilt[i], params,
                                             geometry));
  }
  return a;
}

}  // namespace omnisim
