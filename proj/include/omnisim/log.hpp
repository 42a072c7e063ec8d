#pragma once

#include <array>
#include <string>
#include <vector>

#include "omnisim/rotor_wrench.hpp"
#include "omnisim/spatial.hpp"

namespace omnisim {

// One row of the flight log, written every control tick. Column set and
// order are stable API:
//   t,px,py,pz,qw,qx,qy,qz,wx,wy,wz,a1..a6,n1..n6,
//   Fcx,Fcy,Fcz,Mcx,Mcy,Mcz,Frx,Fry,Frz,Mrx,Mry,Mrz,mask,sat1..sat6
struct LogRecord {
  double t = 0.0;
  Vec3 position;
  UnitQuat attitude;
  Vec3 body_rates;
  std::array<double, kNumRotors> tilt{};
  std::array<double, kNumRotors> speed{};
  Wrench commanded;
  Wrench realized;
  int mask_size = kNumRotors;
  std::array<bool, kNumRotors> saturated{};
};

std::string csv_header();
std::string csv_line(const LogRecord& r);
void write_csv(const std::vector<LogRecord>& log, const std::string& path);

struct MetricsSummary {
  double pos_rmse_m = 0.0;
  double att_rmse_rad = 0.0;
  double max_tilt_rate = 0.0;       // rad/s, from consecutive log rows
  long sat_steps = 0;               // rows with any saturation flag set
  long mask_switches = 0;           // rows where the mask size changed
  double final_pos_err_m = 0.0;
  double final_att_err_rad = 0.0;

  std::string to_text() const;      // fixed "key = value" lines
};

void write_metrics(const MetricsSummary& metrics, const std::string& path);

}  // namespace omnisim
