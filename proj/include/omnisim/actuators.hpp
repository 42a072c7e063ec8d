#pragma once

#include "omnisim/allocation.hpp"
#include "omnisim/rotor_wrench.hpp"
#include "omnisim/vehicle.hpp"

// First-order actuator dynamics. Rotor speeds and tilt angles track their
// commands with the exact discretization of a first-order lag; the tilt
// additionally saturates its closed-loop velocity at the hardware limit.

namespace omnisim {

// One step of the rotor-speed lag, clamped to [n_min, n_max].
double step_rotor(double speed, double speed_des, double tau, double dt,
                  double speed_min, double speed_max);

struct TiltStep {
  double tilt = 0.0;
  bool winding_fault = false;  // hit the +-720 degree cable limit
};

// One step of the tilt lag with the rate clamped to +-rate_max. On a winding
// breach the angle is held at the limit and the fault reported.
TiltStep step_tilt(double tilt, double tilt_des, double tau, double rate_max,
                   double dt);

// Advances all twelve actuator states toward the command. Returns true if
// any tilt hit the winding limit.
bool step_actuators(ActuatorState& state, const ActuatorCommand& command,
                    const VehicleParams& params, double dt);

}  // namespace omnisim
