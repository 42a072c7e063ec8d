#pragma once

#include <functional>
#include <stdexcept>

#include "omnisim/actuators.hpp"
#include "omnisim/allocation.hpp"
#include "omnisim/control.hpp"
#include "omnisim/log.hpp"
#include "omnisim/rotor_wrench.hpp"
#include "omnisim/vehicle.hpp"

// Newton-Euler rigid-body dynamics and the closed-loop step wiring
// controller -> allocation -> actuators -> wrench -> integration.

namespace omnisim {

class ActuatorWindingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RigidBodyState {
  Vec3 position;      // m, inertial
  Vec3 velocity;      // m/s, body frame
  UnitQuat attitude;  // body -> inertial
  Vec3 body_rates;    // rad/s, body frame
};

struct BodyDerivative {
  Vec3 position_dot;
  Vec3 velocity_dot;
  std::array<double, 4> attitude_dot;  // raw quaternion derivative
  Vec3 body_rates_dot;
};

// Newton-Euler derivative under the given body wrench plus gravity.
BodyDerivative derivative(const RigidBodyState& body, const Wrench& wrench,
                          const VehicleParams& params);

using WrenchFn = std::function<Wrench(const RigidBodyState&)>;

// One classical fixed-step 4th-order update; the quaternion is renormalized.
RigidBodyState integrate(const RigidBodyState& body, const WrenchFn& wrench_fn,
                         double dt, const VehicleParams& params);

// Everything that evolves during a closed-loop run.
struct SimState {
  RigidBodyState body;
  ActuatorState actuators;
  PositionIntegrator integrator;
  Allocator allocator;
  RotorGeometry geometry;
  RotorMask mask = RotorMask::full();
  std::array<bool, kNumRotors> saturated{};
  double eps_axis = deg_to_rad(2.0);
  double time = 0.0;
};

// Initializes the state at the setpoint with trimmed actuators, so an
// equilibrium setpoint holds from the first tick.
SimState make_sim_state(const VehicleParams& params,
                        const ControllerGains& gains, const Setpoint& initial,
                        double eps_axis = deg_to_rad(2.0));

struct StepOptions {
  // Apply actuator commands instantly (no lag, no rate limit). Used to check
  // that commanded and realized wrenches agree exactly.
  bool bypass_actuators = false;
  // Extra body wrench sampled once per physics substep.
  std::function<Wrench()> disturbance;
};

// One control tick followed by dt_ctrl/dt_phys physics substeps. Returns the
// log row for the tick. Throws AllocationRankError or ActuatorWindingError;
// callers treat either as a scenario abort.
LogRecord simulate_step(SimState& sim, const Setpoint& sp,
                        const ControllerGains& gains,
                        const VehicleParams& params, double dt_ctrl,
                        double dt_phys, const StepOptions& options = {});

StateEstimate estimate_from(const RigidBodyState& body);

}  // namespace omnisim
