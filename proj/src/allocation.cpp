#include "omnisim/allocation.hpp"

#include <cmath>

namespace omnisim {

namespace {

constexpr double kSingularValueCutoff = 1e-10;  // relative to sigma_max

// Wrap an angle difference into (-pi, pi].
double wrap_pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

}  // namespace

RotorMask RotorMask::excluding_pair(int pair_index) {
  if (pair_index < 0 || pair_index >= RotorGeometry::kNumArmPairs) {
    throw std::invalid_argument(
        "RotorMask: exclusions must name an opposite arm pair (0..2)");
  }
  return RotorMask{pair_index};
}

ForceComponents decompose(double speed, double tilt, double lift_coeff) {
  if (speed < 0.0) {
    throw std::invalid_argument("decompose: speed must be >= 0");
  }
  const double thrust = lift_coeff * speed * speed;
  return {thrust * std::cos(tilt), thrust * std::sin(tilt)};
}

Eigen::Matrix<double, 6, Eigen::Dynamic> static_allocation_matrix(
    const VehicleParams& params, const RotorGeometry& geometry,
    const RotorMask& mask) {
  const int k = mask.active_count();
  Eigen::Matrix<double, 6, Eigen::Dynamic> a(6, 2 * k);
  const double drag_ratio = params.drag_torque_coeff / params.lift_coeff;
  int col = 0;
  for (int i = 0; i < kNumRotors; ++i) {
    if (!mask.active(i)) continue;
    const Vec3 t = geometry.tangent(i);
    const Vec3 r = geometry.rotor[i].position;
    const double c = geometry.rotor[i].spin_sign;
    // Vertical component: thrust along -z, moment arm r x (-e_z) plus the
    // vertical drag-torque share.
    const Vec3 fv_force{0.0, 0.0, -1.0};
    const Vec3 fv_moment = r.cross(fv_force) - Vec3{0.0, 0.0, c * drag_ratio};
    // Lateral component: thrust along the tangent, moment arm r x t plus the
    // tangential drag-torque share.
    const Vec3 fl_force = t;
    const Vec3 fl_moment = r.cross(t) + t * (c * drag_ratio);
    a.col(col) << fv_force.x, fv_force.y, fv_force.z, fv_moment.x, fv_moment.y,
        fv_moment.z;
    a.col(col + 1) << fl_force.x, fl_force.y, fl_force.z, fl_moment.x,
        fl_moment.y, fl_moment.z;
    col += 2;
  }
  return a;
}

bool verify_norm_identity(const DecomposedForces& f_dec,
                          const std::array<double, kNumRotors>& speed,
                          double lift_coeff) {
  double quartic_sum = 0.0;
  for (double n : speed) quartic_sum += n * n * n * n;
  const double lhs = f_dec.squared_norm();
  const double rhs = lift_coeff * lift_coeff * quartic_sum;
  return std::abs(lhs - rhs) < 1e-9 * std::max(1.0, lhs);
}

RotorMask select_mask(const UnitQuat& attitude, const RotorGeometry& geometry,
                      double eps_axis) {
  int best_pair = -1;
  double best_angle = eps_axis;
  for (int p = 0; p < RotorGeometry::kNumArmPairs; ++p) {
    const Vec3 arm_inertial = rotate(attitude, geometry.rotor[p].tilt_axis);
    const double cos_vertical = std::min(std::abs(arm_inertial.z), 1.0);
    const double angle = std::acos(cos_vertical);
    if (angle < best_angle) {
      best_angle = angle;
      best_pair = p;
    }
  }
  return best_pair < 0 ? RotorMask::full()
                       : RotorMask::excluding_pair(best_pair);
}

Allocator::Allocator(const VehicleParams& params, const RotorGeometry& geometry)
    : params_(params), geometry_(geometry) {}

const Allocator::MaskEntry& Allocator::entry_for(const RotorMask& mask) {
  auto it = cache_.find(mask.excluded_pair());
  if (it != cache_.end()) return it->second;

  const Eigen::MatrixXd a = static_allocation_matrix(params_, geometry_, mask);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = kSingularValueCutoff * sigma(0);

  MaskEntry entry;
  Eigen::MatrixXd sigma_pinv = Eigen::MatrixXd::Zero(sigma.size(), sigma.size());
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) {
      sigma_pinv(i, i) = 1.0 / sigma(i);
      ++entry.rank;
    }
  }
  entry.pinv = svd.matrixV() * sigma_pinv * svd.matrixU().transpose();
  return cache_.emplace(mask.excluded_pair(), std::move(entry)).first->second;
}

int Allocator::rank(const RotorMask& mask) { return entry_for(mask).rank; }

AllocationResult Allocator::allocate(const Wrench& desired,
                                     const RotorMask& mask) {
  const MaskEntry& entry = entry_for(mask);
  if (entry.rank < 6) {
    throw AllocationRankError(
        "allocation matrix is rank deficient for the active rotor set");
  }

  const Eigen::VectorXd solution = entry.pinv * to_vector(desired);

  AllocationResult out;
  int col = 0;
  for (int i = 0; i < kNumRotors; ++i) {
    if (!mask.active(i)) {
      out.command.speed[i] = 0.0;
      out.command.tilt[i] = previous_tilt_[i];
      continue;
    }
    const double fv = solution(col);
    const double fl = solution(col + 1);
    col += 2;
    out.f_dec.vertical(i) = fv;
    out.f_dec.lateral(i) = fl;

    // n^2 = sqrt(F_v^2 + F_l^2) / mu, alpha = atan2(F_l, F_v).
    const double thrust = std::hypot(fv, fl);
    double speed = std::sqrt(thrust / params_.lift_coeff);
    if (speed > params_.rotor_speed_max) {
      speed = params_.rotor_speed_max;
      out.command.saturated[i] = true;
    }
    out.command.speed[i] = speed;

    // Unwrap toward the last commanded angle to minimize tilt travel, and
    // fold back by a full turn if that would leave the winding range.
    const double raw = std::atan2(fl, fv);
    double tilt = previous_tilt_[i] + wrap_pi(raw - previous_tilt_[i]);
    if (tilt > kTiltWindingLimit) tilt -= 2.0 * kPi;
    if (tilt < -kTiltWindingLimit) tilt += 2.0 * kPi;
    out.command.tilt[i] = tilt;
    previous_tilt_[i] = tilt;
  }
  return out;
}

}  // namespace omnisim
