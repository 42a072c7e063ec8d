#include "omnisim/actuators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace omnisim {

double step_rotor(double speed, double speed_des, double tau, double dt,
                  double speed_min, double speed_max) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rotor: dt must be > 0");
  const double next = speed_des + (speed - speed_des) * std::exp(-dt / tau);
  return std::clamp(next, speed_min, speed_max);
}

TiltStep step_tilt(double tilt, double tilt_des, double tau, double rate_max,
                   double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_tilt: dt must be > 0");
  const double exact = tilt_des + (tilt - tilt_des) * std::exp(-dt / tau);
  const double max_travel = rate_max * dt;
  double next = std::clamp(exact, tilt - max_travel, tilt + max_travel);

  TiltStep out;
  if (next > kTiltWindingLimit) {
    next = kTiltWindingLimit;
    out.winding_fault = true;
  } else if (next < -kTiltWindingLimit) {
    next = -kTiltWindingLimit;
    out.winding_fault = true;
  }
  out.tilt = next;
  return out;
}

bool step_actuators(ActuatorState& state, const ActuatorCommand& command,
                    const VehicleParams& params, double dt) {
  bool fault = false;
  for (int i = 0; i < kNumRotors; ++i) {
    state.speed[i] =
        step_rotor(state.speed[i], command.speed[i], params.motor_tau, dt,
                   params.rotor_speed_min, params.rotor_speed_max);
    const TiltStep t = step_tilt(state.tilt[i], command.tilt[i],
                                 params.tilt_tau, params.tilt_rate_max, dt);
    state.tilt[i] = t.tilt;
    fault = fault || t.winding_fault;
  }
  return fault;
}

}  // namespace omnisim
