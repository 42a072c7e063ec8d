#include "omnisim/vehicle.hpp"

namespace omnisim {

std::vector<std::string> VehicleParams::validate() const {
  std::vector<std::string> errors;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0)) errors.push_back(std::string(name) + ": must be > 0");
  };
  positive(mass, "params.m");
  positive(lift_coeff, "params.mu");
  positive(drag_torque_coeff, "params.kappa");
  positive(arm_length, "params.l");
  positive(motor_tau, "params.tau_n");
  positive(tilt_tau, "params.tau_alpha");
  positive(tilt_rate_max, "params.tilt_rate_max");
  if (!(gravity >= 0.0)) errors.push_back("params.g: must be >= 0");
  if (!(rotor_speed_min >= 0.0 && rotor_speed_min < rotor_speed_max)) {
    errors.push_back("params.n_min: requires 0 <= n_min < n_max");
  }
  // Inertia must be symmetric positive definite.
  const Mat3& J = inertia;
  const double asym = std::abs(J(0, 1) - J(1, 0)) +
                      std::abs(J(0, 2) - J(2, 0)) +
                      std::abs(J(1, 2) - J(2, 1));
  if (asym > 1e-9) {
    errors.push_back("params.J: must be symmetric");
  } else {
    const double m1 = J(0, 0);
    const double m2 = J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0);
    const double m3 = J.det();
    if (!(m1 > 0.0 && m2 > 0.0 && m3 > 0.0)) {
      errors.push_back("params.J: must be positive definite");
    }
  }
  return errors;
}

VehicleParams default_params() { return VehicleParams{}; }

RotorGeometry rotor_geometry(const VehicleParams& params) {
  RotorGeometry g;
  for (int i = 0; i < kNumRotors; ++i) {
    Rotor& r = g.rotor[i];
    r.azimuth = i * (kPi / 3.0);
    const Vec3 dir{std::cos(r.azimuth), std::sin(r.azimuth), 0.0};
    r.position = dir * params.arm_length;
    r.tilt_axis = dir;
    r.spin_sign = (i == 0 || i == 2 || i == 5) ? 1 : -1;
  }
  return g;
}

}  // namespace omnisim
