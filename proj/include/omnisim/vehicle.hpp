#pragma once

#include <array>
#include <string>
#include <vector>

#include "omnisim/spatial.hpp"

namespace omnisim {

inline constexpr int kNumRotors = 6;

// Physical parameters of the vehicle. Mass, the tilt-rate limit, and the
// per-motor thrust ceiling come from the reference platform; everything else
// is a representative default for a ~3 kg hexacopter and should be configured
// per vehicle.
struct VehicleParams {
  double mass = 3.2;                 // kg
  Mat3 inertia = Mat3::diagonal(0.03, 0.03, 0.05);  // kg*m^2, body frame
  Vec3 com_offset{};                 // m, r_off in the rate controller
  double lift_coeff = 13.7 / (1100.0 * 1100.0);     // mu, N*s^2
  double drag_torque_coeff = 2.2e-7;                // kappa, N*m*s^2
  double arm_length = 0.3;           // m
  double motor_tau = 0.05;           // s, rotor speed time constant
  double tilt_tau = 0.15;            // s, tilt angle time constant
  double tilt_rate_max = 7.85;       // rad/s
  double rotor_speed_max = 1100.0;   // rad/s
  double rotor_speed_min = 0.0;      // rad/s
  double gravity = 9.81;             // m/s^2

  // Returns a list of "<field>: <problem>" strings, empty when valid.
  std::vector<std::string> validate() const;
};

VehicleParams default_params();

struct Rotor {
  double azimuth = 0.0;  // rad, angle of the arm in the body x-y plane
  Vec3 position;         // m, body frame, at the height of the CoM
  Vec3 tilt_axis;        // unit, radially outward along the arm
  int spin_sign = 1;     // +1 or -1, sets the drag-torque direction
};

// Arms every 60 degrees, rotor 1 on the body x axis. Spin signs are +1 for
// rotors 1, 3, 6 and -1 for rotors 2, 4, 5 (1-based numbering).
struct RotorGeometry {
  std::array<Rotor, kNumRotors> rotor;

  // Horizontal unit vector perpendicular to arm i, completing the
  // right-handed rotor frame (arm, tangent, body z).
  Vec3 tangent(int i) const {
    return {-std::sin(rotor[i].azimuth), std::cos(rotor[i].azimuth), 0.0};
  }

  // Opposite-rotor pair p consists of rotors p and p+3 (0-based).
  static constexpr int kNumArmPairs = 3;
};

RotorGeometry rotor_geometry(const VehicleParams& params);

}  // namespace omnisim
