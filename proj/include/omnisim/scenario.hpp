#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "omnisim/control.hpp"
#include "omnisim/log.hpp"
#include "omnisim/sim.hpp"
#include "omnisim/vehicle.hpp"

// Scenario configuration, built-in maneuvers, and the deterministic runner.
//
// Config files are flat "key = value" text; '#' starts a comment. A
// "scenario = <name>" line seeds the config from a built-in maneuver, and
// every other key overrides it. The first "segment" line replaces the base
// trajectory. Segment grammar:
//
//   segment = <hold|ramp> <t0> <t1> pos <x> <y> <z> att <ax> <ay> <az> <deg>
//
// Attitude targets are axis-angle rotations from level flight, composed
// about body axes. Ramps interpolate linearly in position and at constant
// angular rate in attitude, starting from the previous segment's end.

namespace omnisim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SegmentSpec {
  double t_begin = 0.0;
  double t_end = 0.0;
  bool ramp = false;
  Vec3 position;
  Vec3 att_axis{0.0, 0.0, 1.0};
  double att_angle = 0.0;  // rad, from level
  int source_line = 0;     // config line, 0 for built-ins
};

struct DisturbanceSpec {
  double force_std = 0.0;   // N, per axis
  double torque_std = 0.0;  // N*m, per axis
  Vec3 force_bias;
  Vec3 torque_bias;

  bool active() const {
    return force_std > 0.0 || torque_std > 0.0 ||
           force_bias.squared_norm() > 0.0 || torque_bias.squared_norm() > 0.0;
  }
};

struct ScenarioConfig {
  VehicleParams params;
  ControllerGains gains;
  double dt_phys = 1e-3;
  double dt_ctrl = 4e-3;
  double duration = 10.0;
  std::uint64_t seed = 0;
  double eps_axis = deg_to_rad(2.0);
  std::vector<SegmentSpec> segments;
  DisturbanceSpec disturbance;
  std::string csv_path;      // empty: not written
  std::string metrics_path;  // empty: not written
};

// Piecewise setpoint trajectory compiled from contiguous segments.
class Trajectory {
 public:
  static Trajectory compile(const std::vector<SegmentSpec>& segments,
                            double duration);
  Setpoint sample(double t) const;

 private:
  struct Piece {
    double t_begin, t_end;
    Vec3 p_begin, p_end;
    UnitQuat q_begin;
    Vec3 ramp_axis;
    double ramp_angle;  // rad, 0 for pure holds
  };
  std::vector<Piece> pieces_;
};

// Throws ConfigError with a line-qualified message on any problem.
ScenarioConfig parse_config(const std::string& text);

// Serializes the resolved configuration (full precision, output paths
// omitted) so a run can be reproduced from its own artifacts.
std::string config_to_text(const ScenarioConfig& config);

std::vector<std::string> builtin_scenario_names();
ScenarioConfig builtin_scenario(const std::string& name);

struct RunResult {
  std::vector<LogRecord> log;
  MetricsSummary metrics;
  std::optional<std::string> fault;  // set when the run aborted
};

RunResult run(const ScenarioConfig& config);

MetricsSummary compute_metrics(const std::vector<LogRecord>& log,
                               const Trajectory& trajectory);

void write_outputs(const RunResult& result, const std::string& csv_path,
                   const std::string& metrics_path);

}  // namespace omnisim
