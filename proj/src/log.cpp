#include "omnisim/log.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace omnisim {

namespace {

// Full-precision decimal, round-trip exact for doubles.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_header() {
  std::string h = "t,px,py,pz,qw,qx,qy,qz,wx,wy,wz";
  for (int i = 1; i <= kNumRotors; ++i) h += ",a" + std::to_string(i);
  for (int i = 1; i <= kNumRotors; ++i) h += ",n" + std::to_string(i);
  h += ",Fcx,Fcy,Fcz,Mcx,Mcy,Mcz,Frx,Fry,Frz,Mrx,Mry,Mrz,mask";
  for (int i = 1; i <= kNumRotors; ++i) h += ",sat" + std::to_string(i);
  return h;
}

std::string csv_line(const LogRecord& r) {
  std::ostringstream out;
  out << fmt(r.t);
  out << ',' << fmt(r.position.x) << ',' << fmt(r.position.y) << ','
      << fmt(r.position.z);
  out << ',' << fmt(r.attitude.w) << ',' << fmt(r.attitude.x) << ','
      << fmt(r.attitude.y) << ',' << fmt(r.attitude.z);
  out << ',' << fmt(r.body_rates.x) << ',' << fmt(r.body_rates.y) << ','
      << fmt(r.body_rates.z);
  for (double a : r.tilt) out << ',' << fmt(a);
  for (double n : r.speed) out << ',' << fmt(n);
  const Wrench& c = r.commanded;
  out << ',' << fmt(c.force.x) << ',' << fmt(c.force.y) << ','
      << fmt(c.force.z) << ',' << fmt(c.moment.x) << ',' << fmt(c.moment.y)
      << ',' << fmt(c.moment.z);
  const Wrench& w = r.realized;
  out << ',' << fmt(w.force.x) << ',' << fmt(w.force.y) << ','
      << fmt(w.force.z) << ',' << fmt(w.moment.x) << ',' << fmt(w.moment.y)
      << ',' << fmt(w.moment.z);
  out << ',' << r.mask_size;
  for (bool s : r.saturated) out << ',' << (s ? 1 : 0);
  return out.str();
}

void write_csv(const std::vector<LogRecord>& log, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open for writing: " + path);
  file << csv_header() << '\n';
  for (const LogRecord& r : log) file << csv_line(r) << '\n';
  if (!file) throw std::runtime_error("write failed: " + path);
}

std::string MetricsSummary::to_text() const {
  std::ostringstream out;
  out << "pos_rmse_m = " << fmt(pos_rmse_m) << '\n';
  out << "att_rmse_rad = " << fmt(att_rmse_rad) << '\n';
  out << "max_tilt_rate = " << fmt(max_tilt_rate) << '\n';
  out << "sat_steps = " << sat_steps << '\n';
  out << "mask_switches = " << mask_switches << '\n';
  out << "final_pos_err_m = " << fmt(final_pos_err_m) << '\n';
  out << "final_att_err_rad = " << fmt(final_att_err_rad) << '\n';
  return out.str();
}

void write_metrics(const MetricsSummary& metrics, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open for writing: " + path);
  file << metrics.to_text();
  if (!file) throw std::runtime_error("write failed: " + path);
}

}  // namespace omnisim
