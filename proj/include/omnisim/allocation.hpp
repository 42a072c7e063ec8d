#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <stdexcept>

#include "omnisim/rotor_wrench.hpp"
#include "omnisim/spatial.hpp"
#include "omnisim/vehicle.hpp"

// Linear minimum-norm control allocation.
//
// The wrench of a tilted rotor is nonlinear in its tilt angle, but splitting
// each rotor's thrust into a vertical component F_v = mu*n^2*cos(alpha) and a
// lateral component F_l = mu*n^2*sin(alpha) makes the body wrench an exactly
// linear function of the stacked 12-vector of (F_v, F_l) pairs. The map is a
// constant 6x12 matrix; its Moore-Penrose pseudo-inverse yields the
// minimum-norm decomposition for any reachable wrench, and speed/tilt
// commands are recovered per rotor from the component pair. Recovered speeds
// are square roots of nonnegative quantities, so the positivity constraint
// is satisfied by construction.

namespace omnisim {

// Desired wrench is unreachable with the given rotor set.
class AllocationRankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stacked per-rotor force components, ordered
// (F_v1, F_l1, F_v2, F_l2, ..., F_v6, F_l6), in newtons.
struct DecomposedForces {
  std::array<double, 2 * kNumRotors> values{};

  double vertical(int i) const { return values[2 * i]; }
  double lateral(int i) const { return values[2 * i + 1]; }
  double& vertical(int i) { return values[2 * i]; }
  double& lateral(int i) { return values[2 * i + 1]; }
  double squared_norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
  }
};

// Rotor speed and tilt targets. Speeds are always >= 0; tilt angles are
// continuous (unwrapped) and stay inside the hardware winding range.
struct ActuatorCommand {
  std::array<double, kNumRotors> speed{};  // rad/s
  std::array<double, kNumRotors> tilt{};   // rad
  std::array<bool, kNumRotors> saturated{};
};

// Active rotor set. Exclusions always come as an opposite arm pair, so the
// only states are the full set or the full set minus one pair.
class RotorMask {
 public:
  static RotorMask full() { return RotorMask{-1}; }
  // pair_index in [0, 2]; excludes rotors pair_index and pair_index+3.
  static RotorMask excluding_pair(int pair_index);

  bool active(int i) const {
    return excluded_pair_ < 0 ||
           (i != excluded_pair_ && i != excluded_pair_ + 3);
  }
  int active_count() const { return excluded_pair_ < 0 ? 6 : 4; }
  int excluded_pair() const { return excluded_pair_; }
  bool operator==(const RotorMask&) const = default;

 private:
  explicit RotorMask(int p) : excluded_pair_(p) {}
  int excluded_pair_ = -1;
};

// Vertical/lateral split of one rotor's thrust.
struct ForceComponents {
  double vertical;
  double lateral;
};
ForceComponents decompose(double speed, double tilt, double lift_coeff);

// Tilt-independent 6 x (2k) matrix mapping the stacked force components of
// the k active rotors to the body wrench. Column pairs follow ascending
// rotor index.
Eigen::Matrix<double, 6, Eigen::Dynamic> static_allocation_matrix(
    const VehicleParams& params, const RotorGeometry& geometry,
    const RotorMask& mask);

// Checks ||F_dec||^2 == mu^2 * sum(n_i^4) to 1e-9 relative.
bool verify_norm_identity(const DecomposedForces& f_dec,
                          const std::array<double, kNumRotors>& speed,
                          double lift_coeff);

// Picks the active rotor set for a commanded attitude: when an arm axis is
// within eps_axis of inertial vertical, that opposite rotor pair cannot
// oppose gravity and is excluded (the closest pair only, if several
// qualify). The four remaining rotors still span all six wrench axes.
RotorMask select_mask(const UnitQuat& attitude, const RotorGeometry& geometry,
                      double eps_axis);

struct AllocationResult {
  DecomposedForces f_dec;
  ActuatorCommand command;
};

// Allocation context for one vehicle. Owns the pseudo-inverse cache and the
// tilt-unwrap memory; not for concurrent sharing.
class Allocator {
 public:
  Allocator(const VehicleParams& params, const RotorGeometry& geometry);

  // Minimum-norm allocation of the desired wrench over the active rotors.
  // Excluded rotors get zero speed and hold their last commanded tilt.
  // Speeds above n_max are clamped and flagged, never redistributed.
  // Throws AllocationRankError when the masked matrix drops below rank 6.
  AllocationResult allocate(const Wrench& desired, const RotorMask& mask);

  int rank(const RotorMask& mask);

  const std::array<double, kNumRotors>& last_tilt_command() const {
    return previous_tilt_;
  }

 private:
  struct MaskEntry {
    Eigen::MatrixXd pinv;  // (2k) x 6
    int rank = 0;
  };
  const MaskEntry& entry_for(const RotorMask& mask);

  VehicleParams params_;
  RotorGeometry geometry_;
  std::array<double, kNumRotors> previous_tilt_{};
  std::map<int, MaskEntry> cache_;
};

}  // namespace omnisim
