#include "omnisim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "omnisim/diag.hpp"

namespace omnisim {

namespace {

std::string line_prefix(int line) {
  return "line " + std::to_string(line) + ": ";
}

void validate_segments(const std::vector<SegmentSpec>& segments) {
  if (segments.empty()) return;
  if (segments.front().ramp) {
    throw ConfigError(line_prefix(segments.front().source_line) +
                      "first segment must be a hold");
  }
  if (std::abs(segments.front().t_begin) > 1e-9) {
    throw ConfigError(line_prefix(segments.front().source_line) +
                      "segments must start at t = 0");
  }
  for (size_t i = 0; i < segments.size(); ++i) {
    const SegmentSpec& s = segments[i];
    if (!(s.t_end > s.t_begin)) {
      throw ConfigError(line_prefix(s.source_line) +
                        "segment must have t_end > t_begin");
    }
    if (i > 0 && std::abs(s.t_begin - segments[i - 1].t_end) > 1e-9) {
      throw ConfigError(line_prefix(s.source_line) +
                        "segments must be contiguous: expected t_begin = " +
                        std::to_string(segments[i - 1].t_end));
    }
    if (s.att_axis.norm() < 1e-12) {
      throw ConfigError(line_prefix(s.source_line) +
                        "attitude axis must be nonzero");
    }
  }
}

std::vector<SegmentSpec> effective_segments(const ScenarioConfig& config) {
  if (!config.segments.empty()) return config.segments;
  SegmentSpec hold;
  hold.t_begin = 0.0;
  hold.t_end = config.duration;
  hold.position = {0.0, 0.0, 1.0};
  hold.att_axis = {0.0, 0.0, 1.0};
  hold.att_angle = 0.0;
  return {hold};
}

}  // namespace

Trajectory Trajectory::compile(const std::vector<SegmentSpec>& segments,
                               double duration) {
  if (!(duration > 0.0)) throw ConfigError("duration: must be > 0");
  if (segments.empty()) throw ConfigError("trajectory has no segments");
  validate_segments(segments);

  Trajectory traj;
  Vec3 prev_pos = segments.front().position;
  UnitQuat prev_att = attitude_from_level(
      segments.front().att_axis.normalized(), segments.front().att_angle);
  for (const SegmentSpec& s : segments) {
    const UnitQuat target =
        attitude_from_level(s.att_axis.normalized(), s.att_angle);
    Piece piece;
    piece.t_begin = s.t_begin;
    piece.t_end = s.t_end;
    if (s.ramp) {
      piece.p_begin = prev_pos;
      piece.p_end = s.position;
      piece.q_begin = prev_att;
      const AxisAngle rel = relative_axis_angle(prev_att, target);
      piece.ramp_axis = rel.axis;
      piece.ramp_angle = rel.angle;
    } else {
      piece.p_begin = s.position;
      piece.p_end = s.position;
      piece.q_begin = target;
      piece.ramp_axis = {};
      piece.ramp_angle = 0.0;
    }
    traj.pieces_.push_back(piece);
    prev_pos = s.position;
    prev_att = target;
  }
  return traj;
}

Setpoint Trajectory::sample(double t) const {
  size_t idx = pieces_.size() - 1;
  for (size_t i = 0; i < pieces_.size(); ++i) {
    if (t < pieces_[i].t_end) {
      idx = i;
      break;
    }
  }
  const Piece& piece = pieces_[idx];

  Setpoint sp;
  sp.acceleration = {};
  if (piece.ramp_angle == 0.0 && piece.p_begin.x == piece.p_end.x &&
      piece.p_begin.y == piece.p_end.y && piece.p_begin.z == piece.p_end.z) {
    sp.position = piece.p_end;
    sp.velocity = {};
    sp.attitude = piece.q_begin;
    return sp;
  }
  const double span = piece.t_end - piece.t_begin;
  double u = (t - piece.t_begin) / span;
  u = std::clamp(u, 0.0, 1.0);
  sp.position = piece.p_begin + (piece.p_end - piece.p_begin) * u;
  sp.velocity = u < 1.0 ? (piece.p_end - piece.p_begin) / span : Vec3{};
  if (piece.ramp_angle > 0.0) {
    sp.attitude = quat_multiply(
        piece.q_begin,
        UnitQuat::from_axis_angle(piece.ramp_axis, piece.ramp_angle * u));
  } else {
    sp.attitude = piece.q_begin;
  }
  return sp;
}

std::vector<std::string> builtin_scenario_names() {
  return {"hover", "flip_y", "tilted_translation", "roll90_hover"};
}

ScenarioConfig builtin_scenario(const std::string& name) {
  ScenarioConfig c;
  auto seg = [](bool ramp, double t0, double t1, Vec3 pos, Vec3 axis,
                double angle_deg) {
    SegmentSpec s;
    s.ramp = ramp;
    s.t_begin = t0;
    s.t_end = t1;
    s.position = pos;
    s.att_axis = axis;
    s.att_angle = deg_to_rad(angle_deg);
    return s;
  };

  if (name == "hover") {
    c.duration = 10.0;
    c.segments = {seg(false, 0, 10, {0, 0, 1}, {0, 0, 1}, 0)};
    return c;
  }
  if (name == "flip_y") {
    // Slow half-turn about the body y axis and back. The rotor 1-4 arm
    // passes through vertical near 90 degrees, so the rotor set drops to
    // four there and recovers, in both directions.
    c.duration = 34.0;
    const Vec3 p{0, 0, 1.5};
    const Vec3 y{0, 1, 0};
    c.segments = {seg(false, 0, 2, p, y, 0),    seg(true, 2, 14, p, y, 180),
                  seg(false, 14, 16, p, y, 180), seg(true, 16, 28, p, y, 0),
                  seg(false, 28, 34, p, y, 0)};
    return c;
  }
  if (name == "tilted_translation") {
    // Hold 50 degrees of roll and fly a plus pattern in x then y.
    c.duration = 20.0;
    const Vec3 x{1, 0, 0};
    const double h = 1.5;
    c.segments = {seg(false, 0, 2, {0, 0, h}, x, 0),
                  seg(true, 2, 5, {0, 0, h}, x, 50),
                  seg(true, 5, 8, {1, 0, h}, x, 50),
                  seg(true, 8, 11, {0, 0, h}, x, 50),
                  seg(true, 11, 14, {0, 1, h}, x, 50),
                  seg(true, 14, 17, {0, 0, h}, x, 50),
                  seg(false, 17, 20, {0, 0, h}, x, 50)};
    return c;
  }
  if (name == "roll90_hover") {
    // Ramp to the degenerate attitude where the rotor 1-4 arm is vertical
    // (90 degrees about body y with this rotor layout) and hold it under
    // disturbance noise. The allocator flies on the remaining four rotors.
    c.duration = 20.0;
    const Vec3 p{0, 0, 1.5};
    const Vec3 y{0, 1, 0};
    c.segments = {seg(false, 0, 2, p, y, 0), seg(true, 2, 8, p, y, 90),
                  seg(false, 8, 20, p, y, 90)};
    c.disturbance.force_std = 0.05;
    c.disturbance.torque_std = 0.005;
    return c;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

namespace {

struct Line {
  int number;
  std::string key;
  std::string value;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line_prefix(number) + "expected 'key = value'");
    }
    lines.push_back({number, trim(raw.substr(0, eq)), trim(raw.substr(eq + 1))});
  }
  return lines;
}

double parse_double(const Line& line) {
  try {
    size_t used = 0;
    const double v = std::stod(line.value, &used);
    if (used != line.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line_prefix(line.number) + "invalid number for '" +
                      line.key + "': " + line.value);
  }
}

std::vector<double> parse_doubles(const Line& line, size_t min_count,
                                  size_t max_count) {
  std::istringstream in(line.value);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (!in.eof() || out.size() < min_count || out.size() > max_count) {
    throw ConfigError(line_prefix(line.number) + "'" + line.key +
                      "' expects " + std::to_string(min_count) +
                      (max_count != min_count
                           ? ".." + std::to_string(max_count)
                           : "") +
                      " numbers");
  }
  return out;
}

Vec3 parse_vec3(const Line& line) {
  const auto v = parse_doubles(line, 3, 3);
  return {v[0], v[1], v[2]};
}

SegmentSpec parse_segment(const Line& line) {
  std::istringstream in(line.value);
  std::string kind, pos_tag, att_tag;
  SegmentSpec s;
  s.source_line = line.number;
  double angle_deg = 0.0;
  if (!(in >> kind >> s.t_begin >> s.t_end >> pos_tag >> s.position.x >>
        s.position.y >> s.position.z >> att_tag >> s.att_axis.x >>
        s.att_axis.y >> s.att_axis.z >> angle_deg) ||
      (kind != "hold" && kind != "ramp") || pos_tag != "pos" ||
      att_tag != "att") {
    throw ConfigError(
        line_prefix(line.number) +
        "segment grammar: <hold|ramp> <t0> <t1> pos <x> <y> <z> att "
        "<ax> <ay> <az> <angle_deg>");
  }
  std::string rest;
  if (in >> rest) {
    throw ConfigError(line_prefix(line.number) +
                      "unexpected trailing tokens in segment");
  }
  s.ramp = kind == "ramp";
  s.att_angle = deg_to_rad(angle_deg);
  return s;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  const std::vector<Line> lines = tokenize(text);

  ScenarioConfig config;
  bool scenario_seen = false;
  for (const Line& line : lines) {
    if (line.key != "scenario") continue;
    if (scenario_seen) {
      throw ConfigError(line_prefix(line.number) +
                        "duplicate 'scenario' key");
    }
    scenario_seen = true;
    try {
      config = builtin_scenario(line.value);
    } catch (const ConfigError& e) {
      throw ConfigError(line_prefix(line.number) + e.what());
    }
  }

  bool segments_replaced = false;
  for (const Line& line : lines) {
    const std::string& k = line.key;
    if (k == "scenario") continue;
    if (k == "duration") config.duration = parse_double(line);
    else if (k == "dt_phys") config.dt_phys = parse_double(line);
    else if (k == "dt_ctrl") config.dt_ctrl = parse_double(line);
    else if (k == "seed") config.seed = static_cast<std::uint64_t>(parse_double(line));
    else if (k == "eps_axis_deg") config.eps_axis = deg_to_rad(parse_double(line));
    else if (k == "params.m") config.params.mass = parse_double(line);
    else if (k == "params.g") config.params.gravity = parse_double(line);
    else if (k == "params.mu") config.params.lift_coeff = parse_double(line);
    else if (k == "params.kappa") config.params.drag_torque_coeff = parse_double(line);
    else if (k == "params.l") config.params.arm_length = parse_double(line);
    else if (k == "params.tau_n") config.params.motor_tau = parse_double(line);
    else if (k == "params.tau_alpha") config.params.tilt_tau = parse_double(line);
    else if (k == "params.tilt_rate_max") config.params.tilt_rate_max = parse_double(line);
    else if (k == "params.n_max") config.params.rotor_speed_max = parse_double(line);
    else if (k == "params.n_min") config.params.rotor_speed_min = parse_double(line);
    else if (k == "params.r_off") config.params.com_offset = parse_vec3(line);
    else if (k == "params.J") {
      const auto v = parse_doubles(line, 3, 6);
      Mat3 j = Mat3::diagonal(v[0], v[1], v[2]);
      if (v.size() == 6) {
        j(0, 1) = j(1, 0) = v[3];
        j(0, 2) = j(2, 0) = v[4];
        j(1, 2) = j(2, 1) = v[5];
      }
      config.params.inertia = j;
    } else if (k == "gains.kp_pos") config.gains.kp_pos = parse_double(line);
    else if (k == "gains.kd_pos") config.gains.kd_pos = parse_double(line);
    else if (k == "gains.ki_pos") config.gains.ki_pos = parse_double(line);
    else if (k == "gains.kq") config.gains.kq = parse_double(line);
    else if (k == "gains.kr") config.gains.kr = parse_double(line);
    else if (k == "gains.integrator_clamp") config.gains.integrator_clamp = parse_double(line);
    else if (k == "disturbance.force_std") config.disturbance.force_std = parse_double(line);
    else if (k == "disturbance.torque_std") config.disturbance.torque_std = parse_double(line);
    else if (k == "disturbance.force_bias") config.disturbance.force_bias = parse_vec3(line);
    else if (k == "disturbance.torque_bias") config.disturbance.torque_bias = parse_vec3(line);
    else if (k == "output.csv") config.csv_path = line.value;
    else if (k == "output.metrics") config.metrics_path = line.value;
    else if (k == "segment") {
      if (!segments_replaced) {
        config.segments.clear();
        segments_replaced = true;
      }
      config.segments.push_back(parse_segment(line));
    } else {
      throw ConfigError(line_prefix(line.number) + "unknown key '" + k + "'");
    }
  }

  for (const std::string& err : config.params.validate()) {
    throw ConfigError(err);
  }
  if (!(config.duration > 0.0)) throw ConfigError("duration: must be > 0");
  if (!(config.dt_phys > 0.0)) throw ConfigError("dt_phys: must be > 0");
  const double ratio = config.dt_ctrl / config.dt_phys;
  if (std::abs(ratio - std::lround(ratio)) > 1e-9 || std::lround(ratio) < 1) {
    throw ConfigError("dt_ctrl: must be an integer multiple of dt_phys");
  }
  if (config.gains.kp_pos < 0 || config.gains.kd_pos < 0 ||
      config.gains.ki_pos < 0 || config.gains.kq < 0 || config.gains.kr < 0) {
    throw ConfigError("gains: must be >= 0");
  }
  if (config.disturbance.force_std < 0 || config.disturbance.torque_std < 0) {
    throw ConfigError("disturbance: standard deviations must be >= 0");
  }
  if (config.segments.empty()) config.segments = effective_segments(config);
  validate_segments(config.segments);
  return config;
}

std::string config_to_text(const ScenarioConfig& config) {
  std::ostringstream out;
  char buf[40];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "duration = " << num(config.duration) << '\n';
  out << "dt_phys = " << num(config.dt_phys) << '\n';
  out << "dt_ctrl = " << num(config.dt_ctrl) << '\n';
  out << "seed = " << config.seed << '\n';
  out << "eps_axis_deg = " << num(rad_to_deg(config.eps_axis)) << '\n';

  const VehicleParams& p = config.params;
  out << "params.m = " << num(p.mass) << '\n';
  out << "params.g = " << num(p.gravity) << '\n';
  out << "params.mu = " << num(p.lift_coeff) << '\n';
  out << "params.kappa = " << num(p.drag_torque_coeff) << '\n';
  out << "params.l = " << num(p.arm_length) << '\n';
  out << "params.tau_n = " << num(p.motor_tau) << '\n';
  out << "params.tau_alpha = " << num(p.tilt_tau) << '\n';
  out << "params.tilt_rate_max = " << num(p.tilt_rate_max) << '\n';
  out << "params.n_max = " << num(p.rotor_speed_max) << '\n';
  out << "params.n_min = " << num(p.rotor_speed_min) << '\n';
  out << "params.r_off = " << num(p.com_offset.x) << ' '
      << num(p.com_offset.y) << ' ' << num(p.com_offset.z) << '\n';
  out << "params.J = " << num(p.inertia(0, 0)) << ' ' << num(p.inertia(1, 1))
      << ' ' << num(p.inertia(2, 2)) << ' ' << num(p.inertia(0, 1)) << ' '
      << num(p.inertia(0, 2)) << ' ' << num(p.inertia(1, 2)) << '\n';

  const ControllerGains& g = config.gains;
  out << "gains.kp_pos = " << num(g.kp_pos) << '\n';
  out << "gains.kd_pos = " << num(g.kd_pos) << '\n';
  out << "gains.ki_pos = " << num(g.ki_pos) << '\n';
  out << "gains.kq = " << num(g.kq) << '\n';
  out << "gains.kr = " << num(g.kr) << '\n';
  out << "gains.integrator_clamp = " << num(g.integrator_clamp) << '\n';

  const DisturbanceSpec& d = config.disturbance;
  out << "disturbance.force_std = " << num(d.force_std) << '\n';
  out << "disturbance.torque_std = " << num(d.torque_std) << '\n';
  out << "disturbance.force_bias = " << num(d.force_bias.x) << ' '
      << num(d.force_bias.y) << ' ' << num(d.force_bias.z) << '\n';
  out << "disturbance.torque_bias = " << num(d.torque_bias.x) << ' '
      << num(d.torque_bias.y) << ' ' << num(d.torque_bias.z) << '\n';

  for (const SegmentSpec& s : effective_segments(config)) {
    out << "segment = " << (s.ramp ? "ramp" : "hold") << ' '
        << num(s.t_begin) << ' ' << num(s.t_end) << " pos "
        << num(s.position.x) << ' ' << num(s.position.y) << ' '
        << num(s.position.z) << " att " << num(s.att_axis.x) << ' '
        << num(s.att_axis.y) << ' ' << num(s.att_axis.z) << ' '
        << num(rad_to_deg(s.att_angle)) << '\n';
  }
  return out.str();
}

RunResult run(const ScenarioConfig& config) {
  const Trajectory trajectory =
      Trajectory::compile(effective_segments(config), config.duration);

  RunResult result;
  std::optional<SimState> sim;
  try {
    sim.emplace(make_sim_state(config.params, config.gains,
                               trajectory.sample(0.0), config.eps_axis));
  } catch (const AllocationRankError& e) {
    result.fault = e.what();
    diag(LogLevel::kError, std::string("scenario aborted: ") + e.what());
    result.metrics = compute_metrics(result.log, trajectory);
    return result;
  }

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  StepOptions options;
  if (config.disturbance.active()) {
    const DisturbanceSpec& d = config.disturbance;
    options.disturbance = [&rng, &unit_normal, d]() {
      Wrench w{d.force_bias, d.torque_bias};
      w.force += Vec3{unit_normal(rng), unit_normal(rng), unit_normal(rng)} *
                 d.force_std;
      w.moment += Vec3{unit_normal(rng), unit_normal(rng), unit_normal(rng)} *
                  d.torque_std;
      return w;
    };
  }

  const long ticks = std::lround(config.duration / config.dt_ctrl);
  diag(LogLevel::kInfo,
       "running scenario: " + std::to_string(ticks) + " control ticks");

  result.log.reserve(ticks);
  for (long k = 0; k < ticks; ++k) {
    const Setpoint sp = trajectory.sample(sim->time);
    try {
      result.log.push_back(simulate_step(*sim, sp, config.gains,
                                         config.params, config.dt_ctrl,
                                         config.dt_phys, options));
    } catch (const AllocationRankError& e) {
      result.fault = e.what();
      break;
    } catch (const ActuatorWindingError& e) {
      result.fault = e.what();
      break;
    }
  }
  if (result.fault) diag(LogLevel::kError, "scenario aborted: " + *result.fault);
  result.metrics = compute_metrics(result.log, trajectory);
  return result;
}

MetricsSummary compute_metrics(const std::vector<LogRecord>& log,
                               const Trajectory& trajectory) {
  MetricsSummary m;
  if (log.empty()) return m;

  double pos_sq_sum = 0.0;
  double att_sq_sum = 0.0;
  for (size_t k = 0; k < log.size(); ++k) {
    const LogRecord& r = log[k];
    const Setpoint sp = trajectory.sample(r.t);
    const Vec3 dp = r.position - sp.position;
    pos_sq_sum += dp.dot(dp);
    const double ang = attitude_angle(sp.attitude, r.attitude);
    att_sq_sum += ang * ang;

    bool any_sat = false;
    for (bool s : r.saturated) any_sat = any_sat || s;
    if (any_sat) ++m.sat_steps;
    if (k > 0) {
      if (r.mask_size != log[k - 1].mask_size) ++m.mask_switches;
      const double dt = r.t - log[k - 1].t;
      for (int i = 0; i < kNumRotors; ++i) {
        const double rate = std::abs(r.tilt[i] - log[k - 1].tilt[i]) / dt;
        m.max_tilt_rate = std::max(m.max_tilt_rate, rate);
      }
    }
  }
  m.pos_rmse_m = std::sqrt(pos_sq_sum / static_cast<double>(log.size()));
  m.att_rmse_rad = std::sqrt(att_sq_sum / static_cast<double>(log.size()));

  const LogRecord& last = log.back();
  const Setpoint sp = trajectory.sample(last.t);
  m.final_pos_err_m = (last.position - sp.position).norm();
  m.final_att_err_rad = attitude_angle(sp.attitude, last.attitude);
  return m;
}

void write_outputs(const RunResult& result, const std::string& csv_path,
                   const std::string& metrics_path) {
  if (!csv_path.empty()) write_csv(result.log, csv_path);
  if (!metrics_path.empty()) write_metrics(result.metrics, metrics_path);
}

}  // namespace omnisim
