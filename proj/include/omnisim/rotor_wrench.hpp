#pragma once

#include <Eigen/Dense>
#include <array>

#include "omnisim/spatial.hpp"
#include "omnisim/vehicle.hpp"

namespace omnisim {

// Force/moment pair acting at the center of gravity, body frame.
struct Wrench {
  Vec3 force;   // N
  Vec3 moment;  // N*m

  Wrench operator+(const Wrench& o) const {
    return {force + o.force, moment + o.moment};
  }
  Wrench operator-(const Wrench& o) const {
    return {force - o.force, moment - o.moment};
  }
};

// Actual rotor speeds and tilt angles. Tilt angles are continuous
// (unwrapped); the hardware winding limit is +-720 degrees.
struct ActuatorState {
  std::array<double, kNumRotors> speed{};  // rad/s, >= 0
  std::array<double, kNumRotors> tilt{};   // rad
};

inline constexpr double kTiltWindingLimit = 4.0 * kPi;

// Thrust magnitude mu*n^2. Rejects negative speeds.
double rotor_thrust(double speed, double lift_coeff);

// Drag torque magnitude kappa*n^2. Rejects negative speeds.
double rotor_drag_torque(double speed, double drag_torque_coeff);

// Rotation from the rotor frame to the body frame: azimuth alignment of the
// rotor x axis with the arm, composed with the tilt rotation about the arm.
// Positive tilt is a right-hand rotation about the outward arm axis.
Mat3 rotor_frame_rotation(const RotorGeometry& geometry, int i, double tilt);

// Wrench of a single rotor about the center of gravity.
Wrench single_rotor_wrench(int i, double speed, double tilt,
                           const VehicleParams& params,
                           const RotorGeometry& geometry);

// Total body wrench: thrust and drag torque of each rotor rotated into the
// body frame, plus the thrust moment arm r_i x F_i. This geometric sum is
// the authoritative forward model.
Wrench body_wrench(const ActuatorState& state, const VehicleParams& params,
                   const RotorGeometry& geometry);

// Tilt-dependent 6x6 allocation matrix: rows (Fx,Fy,Fz,Mx,My,Mz), column i
// multiplies n_i^2. Column i equals the wrench of rotor i alone at unit
// squared speed, so A(alpha)*N reproduces body_wrench exactly. Singular at
// all-zero tilt (no lateral force authority there).
using AllocationMatrix = Eigen::Matrix<double, 6, 6>;

AllocationMatrix allocation_matrix(const std::array<double, kNumRotors>& tilt,
                                   const VehicleParams& params,
                                   const RotorGeometry& geometry);

inline Eigen::Matrix<double, 6, 1> to_vector(const Wrench& w) {
  Eigen::Matrix<double, 6, 1> v;
  v << w.force.x, w.force.y, w.force.z, w.moment.x, w.moment.y, w.moment.z;
  return v;
}

inline Wrench from_vector(const Eigen::Matrix<double, 6, 1>& v) {
  return {{v(0), v(1), v(2)}, {v(3), v(4), v(5)}};
}

}  // namespace omnisim
